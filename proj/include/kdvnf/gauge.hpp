#pragma once
// The bilinear operator D, the gauge G and its inverse, the Miura map and the
// spatial scaling map on the frequency lattice.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "kdvnf/multiplier.hpp"
#include "kdvnf/parallel.hpp"
#include "kdvnf/spectral.hpp"

namespace kdvnf {

namespace detail {

// Output bins above this size are split across workers.
inline constexpr int parallel_bin_threshold = 512;

template <class Body>
void for_each_bin(const GridSpec& g, Body&& body) {
    const std::size_t n = static_cast<std::size_t>(g.kmax() - g.kmin() + 1);
    auto fn = [&](std::size_t i) { body(g.kmin() + static_cast<int>(i)); };
    if (g.N >= parallel_bin_threshold)
        parallel_for(n, fn);
    else
        for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace detail

// D[f,g](xi) = -(h/3) sum over stationary pairs with nonzero frequencies of
// f(xi1) g(xi2) / (xi1 xi2).
inline SpectralField apply_D(const SpectralField& f, const SpectralField& g, const RegionConfig& cfg) {
    f.require_same_grid(g);
    const GridSpec& grid = f.grid();
    const Region<double> reg(cfg);
    const double h = grid.h;
    SpectralField out(grid);
    detail::for_each_bin(grid, [&](int k) {
        Complex acc(0.0, 0.0);
        const int lo = std::max(grid.kmin(), k - grid.kmax());
        const int hi = std::min(grid.kmax(), k - grid.kmin());
        for (int k1 = lo; k1 <= hi; ++k1) {
            const int k2 = k - k1;
            if (k1 == 0 || k2 == 0) continue;
            const double x1 = grid.xi(k1), x2 = grid.xi(k2);
            if (!reg.stationary(x1, x2)) continue;
            acc += f[k1] * g[k2] / (x1 * x2);
        }
        out[k] = -(h / 3.0) * acc;
    });
    return out;
}

inline SpectralField gauge_inverse(const SpectralField& z, const RegionConfig& cfg) {
    return z + apply_D(z, z, cfg);
}

struct GaugeSolve {
    SpectralField w;
    int iterations = 0;
    double last_increment = 0.0;
};

inline constexpr double default_gauge_tol = 1e-12;
inline constexpr int default_gauge_max_iter = 100;

// Fixed point of w = u - D[w,w] started at w = u. Divergence is declared when
// the increment grows on three consecutive steps or stops being finite.
inline GaugeSolve gauge_forward_detailed(const SpectralField& u, const RegionConfig& cfg,
                                         double tol = default_gauge_tol, int max_iter = default_gauge_max_iter) {
    if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");
    if (max_iter < 1) throw ValidationError("max_iter", "must be at least 1");
    SpectralField w = u;
    double prev = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (int it = 1; it <= max_iter; ++it) {
        SpectralField next = u - apply_D(w, w, cfg);
        const double inc = sup_norm(next - w);
        w = std::move(next);
        if (!std::isfinite(inc) || !std::isfinite(sup_norm(w)))
            throw DataTooLargeError("gauge_forward: iterate is no longer finite after " + std::to_string(it) +
                                    " steps");
        if (inc <= tol) return {std::move(w), it, inc};
        growth = inc > prev ? growth + 1 : 0;
        if (growth >= 3)
            throw DataTooLargeError("gauge_forward: iteration is not contracting (increment " + fmt17(inc) +
                                    " after " + std::to_string(it) + " steps)");
        prev = inc;
    }
    throw ConvergenceError("gauge_forward: no convergence to " + fmt17(tol) + " within " + std::to_string(max_iter) +
                           " iterations");
}

inline SpectralField gauge_forward(const SpectralField& u, const RegionConfig& cfg, double tol = default_gauge_tol,
                                   int max_iter = default_gauge_max_iter) {
    return gauge_forward_detailed(u, cfg, tol, max_iter).w;
}

// Fourier side of dz/dx + z^2/3.
inline SpectralField miura_map(const SpectralField& z) {
    const GridSpec& grid = z.grid();
    const double h = grid.h;
    SpectralField out(grid);
    detail::for_each_bin(grid, [&](int k) {
        Complex acc(0.0, 0.0);
        const int lo = std::max(grid.kmin(), k - grid.kmax());
        const int hi = std::min(grid.kmax(), k - grid.kmin());
        for (int k1 = lo; k1 <= hi; ++k1) acc += z[k1] * z[k - k1];
        out[k] = Complex(0.0, grid.xi(k)) * z[k] + (h / 3.0) * acc;
    });
    return out;
}

// z - (h/3) sum over all pairs of nonzero frequencies of z(xi1) z(xi2) / (xi1 xi2);
// the Miura map composed with the antiderivative, which is undefined on the
// zero mode.
inline SpectralField miura_antideriv(const SpectralField& z) {
    const GridSpec& grid = z.grid();
    const double h = grid.h;
    SpectralField out(grid);
    detail::for_each_bin(grid, [&](int k) {
        Complex acc(0.0, 0.0);
        const int lo = std::max(grid.kmin(), k - grid.kmax());
        const int hi = std::min(grid.kmax(), k - grid.kmin());
        for (int k1 = lo; k1 <= hi; ++k1) {
            const int k2 = k - k1;
            if (k1 == 0 || k2 == 0) continue;
            acc += z[k1] * z[k2] / (grid.xi(k1) * grid.xi(k2));
        }
        out[k] = z[k] + (-(h / 3.0) * acc);
    });
    return out;
}

struct Ratio {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Ratio() = default;
    Ratio(std::int64_t p, std::int64_t q) : num(p), den(q) {
        if (p <= 0 || q <= 0) throw DomainError("scaling factor must be a positive rational");
        const std::int64_t g = std::gcd(p, q);
        num /= g;
        den /= g;
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Spatial scaling f(x) -> lambda^2 f(lambda x), on the Fourier side
// F(xi) -> lambda F(xi / lambda). Every nonzero input mode must land on the grid.
inline SpectralField scaling_map(const SpectralField& f, Ratio lambda) {
    const GridSpec& grid = f.grid();
    SpectralField out(grid);
    const double lam = lambda.value();
    for (int m = grid.kmin(); m <= grid.kmax(); ++m) {
        if (f[m] == Complex(0.0, 0.0)) continue;
        const std::int64_t scaled = static_cast<std::int64_t>(m) * lambda.num;
        if (scaled % lambda.den != 0)
            throw DomainError("scaling_map: mode " + std::to_string(m) + " has no lattice image under lambda = " +
                              std::to_string(lambda.num) + "/" + std::to_string(lambda.den));
        const std::int64_t k = scaled / lambda.den;
        if (!grid.in_range(k))
            throw DomainError("scaling_map: mode " + std::to_string(m) + " leaves the grid under lambda = " +
                              std::to_string(lambda.num) + "/" + std::to_string(lambda.den));
        out[static_cast<int>(k)] = lam * f[m];
    }
    return out;
}

}  // namespace kdvnf
