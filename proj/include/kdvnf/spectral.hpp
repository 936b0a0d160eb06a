#pragma once
// Uniform frequency lattice and fields on it.
//
// A field stores the Fourier density F(xi_k) at xi_k = k*h for
// k = -N/2 .. N/2-1, normalized so that the transform of a product is the
// lattice convolution h * sum_k1 F(k1) G(k - k1). The mode k = -N/2 has no
// mirror partner on the lattice; it is held at zero and ignored by every
// operator, so all outputs live on the symmetric range |k| <= N/2-1.

#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kdvnf/errors.hpp"
#include "kdvnf/format.hpp"

namespace kdvnf {

using Complex = std::complex<double>;

struct GridSpec {
    int N = 64;
    double h = 0.25;

    GridSpec() = default;
    GridSpec(int n, double spacing) : N(n), h(spacing) { validate(); }

    void validate() const {
        if (N < 4 || N % 2 != 0) throw ValidationError("N", "mode count must be an even integer >= 4");
        if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("h", "frequency spacing must be positive");
        if (h > 0.25) throw ValidationError("h", "frequency spacing must not exceed 1/4");
    }

    int kmin() const noexcept { return -N / 2 + 1; }
    int kmax() const noexcept { return N / 2 - 1; }
    bool in_range(long k) const noexcept { return k >= kmin() && k <= kmax(); }
    double xi(int k) const noexcept { return k * h; }
    double max_frequency() const noexcept { return h * N / 2; }

    bool operator==(const GridSpec& o) const noexcept { return N == o.N && h == o.h; }
};

class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(GridSpec g) : grid_(g), c_(static_cast<std::size_t>(g.N), Complex(0.0, 0.0)) {}

    const GridSpec& grid() const noexcept { return grid_; }
    int N() const noexcept { return grid_.N; }
    double h() const noexcept { return grid_.h; }

    // Raw storage, index i <-> k = i - N/2.
    std::vector<Complex>& data() noexcept { return c_; }
    const std::vector<Complex>& data() const noexcept { return c_; }
    std::size_t offset() const noexcept { return static_cast<std::size_t>(grid_.N / 2); }

    Complex& operator[](int k) { return c_[static_cast<std::size_t>(k + grid_.N / 2)]; }
    const Complex& operator[](int k) const { return c_[static_cast<std::size_t>(k + grid_.N / 2)]; }

    Complex at(int k) const {
        if (!grid_.in_range(k)) return {0.0, 0.0};
        return (*this)[k];
    }

    // Sets F(k) and F(-k) = conj(F(k)); k = 0 keeps only the real part.
    void set_mode(int k, Complex v) {
        if (!grid_.in_range(k)) throw DomainError("mode index " + std::to_string(k) + " outside the grid");
        if (k == 0) {
            (*this)[0] = {v.real(), 0.0};
            return;
        }
        (*this)[k] = v;
        (*this)[-k] = std::conj(v);
    }

    bool is_hermitian(double tol = 0.0) const {
        if (std::abs(c_[0]) > tol) return false;
        for (int k = 0; k <= grid_.kmax(); ++k)
            if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol) return false;
        return true;
    }

    // Orthogonal projection onto Hermitian fields.
    void hermitize() {
        c_[0] = {0.0, 0.0};
        (*this)[0] = {(*this)[0].real(), 0.0};
        for (int k = 1; k <= grid_.kmax(); ++k) {
            const Complex a = 0.5 * ((*this)[k] + std::conj((*this)[-k]));
            (*this)[k] = a;
            (*this)[-k] = std::conj(a);
        }
    }

    bool is_zero() const {
        for (const auto& v : c_)
            if (v != Complex(0.0, 0.0)) return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    SpectralField& operator*=(Complex a) {
        for (auto& v : c_) v *= a;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

    void require_same_grid(const SpectralField& o) const {
        if (!(grid_ == o.grid_))
            throw GridMismatchError("fields live on different grids (N=" + std::to_string(grid_.N) + " vs N=" +
                                    std::to_string(o.grid_.N) + ")");
    }

private:
    GridSpec grid_;
    std::vector<Complex> c_;
};

inline double japanese(double xi) { return std::sqrt(1.0 + xi * xi); }

// Lattice Fourier-Lebesgue norm: sup for p = inf, else (h sum (<xi>^s |F|)^p)^(1/p).
inline double fl_norm(const SpectralField& f, double s, double p) {
    if (!(p >= 1.0)) throw DomainError("fl_norm: p must lie in [1, inf]");
    const GridSpec& g = f.grid();
    const bool sup = std::isinf(p);
    double acc = 0.0;
    for (int k = g.kmin(); k <= g.kmax(); ++k) {
        const double w = (s == 0.0 ? 1.0 : std::pow(japanese(g.xi(k)), s)) * std::abs(f[k]);
        if (sup)
            acc = std::max(acc, w);
        else
            acc += std::pow(w, p);
    }
    return sup ? acc : std::pow(g.h * acc, 1.0 / p);
}

inline double sup_norm(const SpectralField& f) { return fl_norm(f, 0.0, std::numeric_limits<double>::infinity()); }

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    a.require_same_grid(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// --- CSV -------------------------------------------------------------------

inline void write_field_csv(std::ostream& os, const SpectralField& f) {
    os << "# N=" << f.N() << " h=" << fmt17(f.h()) << "\n";
    os << "k,re,im\n";
    for (int k = f.grid().kmin(); k <= f.grid().kmax(); ++k)
        os << k << "," << fmt17(f[k].real()) << "," << fmt17(f[k].imag()) << "\n";
}

inline void write_field_csv(const std::string& path, const SpectralField& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_field_csv(os, f);
    if (!os) throw Error("write failed: " + path);
}

inline SpectralField read_field_csv(std::istream& is) {
    std::string line;
    int lineno = 0;
    int N = -1;
    double h = -1;
    SpectralField f;
    bool have_grid = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                try {
                    if (key == "N") N = std::stoi(val);
                    if (key == "h") h = std::stod(val);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "bad grid header value '" + tok + "'");
                }
            }
            if (N > 0 && h > 0 && !have_grid) {
                f = SpectralField(GridSpec(N, h));
                have_grid = true;
            }
            continue;
        }
        if (line.rfind("k,", 0) == 0) continue;
        if (!have_grid) throw ParseError(lineno, "data before the '# N=.. h=..' header");
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
            throw ParseError(lineno, "expected k,re,im");
        try {
            const int k = std::stoi(a);
            if (!f.grid().in_range(k)) throw ParseError(lineno, "mode " + a + " outside the grid");
            f[k] = {std::stod(b), std::stod(c)};
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed number in '" + line + "'");
        }
    }
    if (!have_grid) throw ParseError(lineno, "missing grid header");
    return f;
}

inline SpectralField read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_field_csv(is);
}

}  // namespace kdvnf
