#pragma once
// Time integration of KdV and of the truncated gauged equation on the lattice,
// the tree-indexed nonlinearities, and the equivalence / remainder experiments.
//
// Both equations share the form dF/dt = i xi^3 F + N(F). The linear part is
// integrated exactly with the factor exp(i xi^3 t) and N is advanced by
// classical RK4 on the interaction variable, re-anchored at the start of each
// step (Lawson's scheme).
//
// Tree nonlinearities are Galerkin truncated: every node frequency of a tree,
// internal or leaf, must lie on the lattice. Under that rule the lattice
// gauge transform maps KdV to the gauged equation with no further error.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "kdvnf/gauge.hpp"
#include "kdvnf/multiplier.hpp"
#include "kdvnf/parallel.hpp"
#include "kdvnf/spectral.hpp"
#include "kdvnf/tree.hpp"

namespace kdvnf {

inline constexpr int max_truncation_order = 4;
inline constexpr int max_modes_high_order = 64;

struct SolverConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    int J = 1;
    bool dealias = false;
    RegionConfig region{};
    int checkpoints = 10;
    double blowup_threshold = 1e6;

    void validate(const GridSpec& g) const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt", "must be positive");
        if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final", "must be positive");
        if (J < 1) throw ValidationError("J", "must be at least 1");
        if (checkpoints < 1) throw ValidationError("checkpoints", "must be at least 1");
        region.validate();
        check_resource(J, g);
    }

    static void check_resource(int j, const GridSpec& g) {
        if (j > max_truncation_order)
            throw BoundedResourceError("tree order " + std::to_string(j) + " exceeds the supported maximum " +
                                       std::to_string(max_truncation_order));
        if (j >= 3 && g.N > max_modes_high_order)
            throw BoundedResourceError("tree order " + std::to_string(j) + " requires N <= " +
                                       std::to_string(max_modes_high_order) + " (got N=" + std::to_string(g.N) + ")");
    }
};

struct Trajectory {
    GridSpec grid;
    std::vector<double> times;
    std::vector<SpectralField> fields;
    std::vector<double> mass;
    std::vector<double> momentum;

    std::size_t size() const noexcept { return times.size(); }
    const SpectralField& final_field() const { return fields.back(); }
};

inline double mass_of(const SpectralField& f) { return f[0].real(); }

inline double momentum_of(const SpectralField& f) {
    double acc = 0.0;
    for (int k = f.grid().kmin(); k <= f.grid().kmax(); ++k) acc += std::norm(f[k]);
    return f.h() * acc;
}

namespace detail {

inline Complex cmul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double hpow(double h, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= h;
    return r;
}

inline void dealias_in_place(SpectralField& f) {
    const int cut = f.N() / 3;
    for (int k = f.grid().kmin(); k <= f.grid().kmax(); ++k)
        if (std::abs(k) > cut) f[k] = {0.0, 0.0};
}

// Bins k >= 1 of i xi h sum u(k1) u(k-k1); the negative bins follow by
// conjugation and the zero bin vanishes.
inline void kdv_rhs_hermitian(const SpectralField& u, SpectralField& out) {
    const GridSpec& g = u.grid();
    const double h = g.h;
    const Complex* z = u.data().data() + u.offset();
    Complex* o = out.data().data() + out.offset();
    o[0] = {0.0, 0.0};
    out.data()[0] = {0.0, 0.0};
    for (int k = 1; k <= g.kmax(); ++k) {
        double re = 0.0, im = 0.0;
        const int lo = k - g.kmax();
        for (int k1 = lo; k1 <= g.kmax(); ++k1) {
            const Complex a = z[k1], b = z[k - k1];
            re += a.real() * b.real() - a.imag() * b.imag();
            im += a.real() * b.imag() + a.imag() * b.real();
        }
        const double s = g.xi(k) * h;
        o[k] = {-s * im, s * re};
        o[-k] = std::conj(o[k]);
    }
}

}  // namespace detail

// Fourier coefficients of d/dx (u^2).
inline SpectralField kdv_nonlinearity(const SpectralField& u, bool dealias = false) {
    SpectralField in = u;
    if (dealias) detail::dealias_in_place(in);
    const GridSpec& g = u.grid();
    SpectralField out(g);
    detail::for_each_bin(g, [&](int k) {
        Complex acc(0.0, 0.0);
        const int lo = std::max(g.kmin(), k - g.kmax());
        const int hi = std::min(g.kmax(), k - g.kmin());
        for (int k1 = lo; k1 <= hi; ++k1) acc += detail::cmul(in[k1], in[k - k1]);
        out[k] = Complex(0.0, g.xi(k) * g.h) * acc;
    });
    out[0] = {0.0, 0.0};
    if (dealias) detail::dealias_in_place(out);
    return out;
}

// ---------------------------------------------------------------------------
// Tree nonlinearities as sparse tables

// What a tree term multiplies the leaf product by.
enum class TermKind { m1, m2, m3, m4, remainder };

inline TermKind term_kind_for(int ell) {
    switch (ell) {
        case 1: return TermKind::m1;
        case 2: return TermKind::m2;
        case 3: return TermKind::m3;
        case 4: return TermKind::m4;
        default: throw DomainError("multiplier index must be 1..4");
    }
}

inline bool admits(const Tree& t, int ell) {
    const TreeType tag = classify_tree(t).tag;
    switch (ell) {
        case 1: return tag == TreeType::TypeI;
        case 2:
        case 3: return tag == TreeType::TypeII_III;
        case 4: return tag == TreeType::TypeIV;
        default: return false;
    }
}

// Entries (output bin, leaf bins in lexicographic leaf order, coefficient),
// sorted by output bin and then by the leaf tuple.
struct TermTable {
    Tree tree = Tree::seedling();
    TermKind kind = TermKind::m1;
    int leaves = 0;
    std::vector<int> out;
    std::vector<int> idx;
    std::vector<double> coef;

    std::size_t size() const noexcept { return out.size(); }
    bool empty() const noexcept { return out.empty(); }
};

namespace detail {

enum class Constraint : unsigned char { none, free, in_A, in_Ac };

inline std::vector<Constraint> constraints_for(const Tree& t, TermKind kind) {
    std::vector<Constraint> c(t.size(), Constraint::none);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.child1_index(static_cast<int>(i)) >= 0) c[i] = Constraint::in_Ac;
    const TreeTypeTag tag = classify_tree(t);
    switch (kind) {
        case TermKind::m1: c[0] = Constraint::in_A; break;
        case TermKind::m2: c[t.index_of(*tag.star)] = Constraint::in_A; break;
        case TermKind::m3: c[t.parent_index(t.index_of(*tag.star))] = Constraint::free; break;
        case TermKind::m4: c[t.index_of(*tag.star)] = Constraint::free; break;
        case TermKind::remainder: break;
    }
    return c;
}

inline double term_value(const Tree& t, const TreeTypeTag& tag, TermKind kind, std::span<const double> v,
                         const Region<double>& reg) {
    switch (kind) {
        case TermKind::m1: return kernel::mul_typed<double>(t, tag, v, 1, reg, Eval::regularized);
        case TermKind::m2: return kernel::mul_typed<double>(t, tag, v, 2, reg, Eval::regularized);
        case TermKind::m3: return kernel::mul_typed<double>(t, tag, v, 3, reg, Eval::regularized);
        case TermKind::m4: return kernel::mul_typed<double>(t, tag, v, 4, reg, Eval::regularized);
        case TermKind::remainder: {
            const double mb = kernel::mul_boundary<double>(t, v, reg, Eval::regularized);
            return mb == 0.0 ? 0.0 : kernel::phase_total<double>(t, v) * mb;
        }
    }
    return 0.0;
}

inline void check_term(const Tree& t, TermKind kind) {
    if (kind == TermKind::remainder) return;
    const int ell = static_cast<int>(kind) + 1;
    if (!admits(t, ell))
        throw DomainError("multiplier m_" + std::to_string(ell) + " is not defined on tree " + t.to_json());
}

}  // namespace detail

inline TermTable build_term_table(const Tree& t, TermKind kind, const GridSpec& g, const RegionConfig& cfg) {
    detail::check_term(t, kind);
    SolverConfig::check_resource(t.j(), g);
    const Region<double> reg(cfg);
    const TreeTypeTag tag = classify_tree(t);
    const auto cons = detail::constraints_for(t, kind);
    const int n = static_cast<int>(t.size());
    std::vector<int> parents;
    for (int i = 0; i < n; ++i)
        if (t.child1_index(i) >= 0) parents.push_back(i);
    const int L = static_cast<int>(t.leaves().size());
    const double hj = detail::hpow(g.h, t.j());

    TermTable tab;
    tab.tree = t;
    tab.kind = kind;
    tab.leaves = L;

    std::vector<int> k(n, 0);
    std::vector<double> v(n, 0.0);
    std::vector<int> leaf_bins(L, 0);

    auto finalize = [&] {
        for (int i = 0; i < n; ++i) v[i] = g.xi(k[i]);
        const double m = detail::term_value(t, tag, kind, v, reg);
        if (m == 0.0) return;
        for (int i = 0; i < n; ++i)
            if (t.child1_index(i) < 0) leaf_bins[t.leaf_slot(i)] = k[i];
        tab.out.push_back(k[0]);
        tab.idx.insert(tab.idx.end(), leaf_bins.begin(), leaf_bins.end());
        tab.coef.push_back(hj * m);
    };

    auto rec = [&](auto&& self, std::size_t p) -> void {
        if (p == parents.size()) {
            finalize();
            return;
        }
        const int i = parents[p];
        const int c1 = t.child1_index(i), c2 = t.child2_index(i);
        const int K = k[i];
        const int lo = std::max(g.kmin(), K - g.kmax());
        const int hi = std::min(g.kmax(), K - g.kmin());
        for (int k1 = lo; k1 <= hi; ++k1) {
            const int k2 = K - k1;
            if (cons[i] != detail::Constraint::free) {
                const bool st = reg.stationary(g.xi(k1), g.xi(k2));
                if (cons[i] == detail::Constraint::in_A && st) continue;
                if (cons[i] == detail::Constraint::in_Ac && !st) continue;
            }
            k[c1] = k1;
            k[c2] = k2;
            self(self, p + 1);
        }
    };
    for (int K = g.kmin(); K <= g.kmax(); ++K) {
        k[0] = K;
        rec(rec, 0);
    }

    // Sort by (out, leaf tuple).
    const std::size_t E = tab.out.size();
    std::vector<std::size_t> order(E);
    for (std::size_t e = 0; e < E; ++e) order[e] = e;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tab.out[a] != tab.out[b]) return tab.out[a] < tab.out[b];
        return std::lexicographical_compare(tab.idx.begin() + a * L, tab.idx.begin() + (a + 1) * L,
                                            tab.idx.begin() + b * L, tab.idx.begin() + (b + 1) * L);
    });
    TermTable sorted;
    sorted.tree = tab.tree;
    sorted.kind = kind;
    sorted.leaves = L;
    sorted.out.reserve(E);
    sorted.idx.reserve(E * L);
    sorted.coef.reserve(E);
    for (std::size_t e : order) {
        sorted.out.push_back(tab.out[e]);
        sorted.idx.insert(sorted.idx.end(), tab.idx.begin() + e * L, tab.idx.begin() + (e + 1) * L);
        sorted.coef.push_back(tab.coef[e]);
    }
    return sorted;
}

namespace detail {

// acc[out] += coef * prod(leaves); entries [b, e).
inline void accumulate_entries(const TermTable& tab, const Complex* z, Complex* acc, std::size_t b, std::size_t e) {
    const int L = tab.leaves;
    for (std::size_t n = b; n < e; ++n) {
        const int* ix = tab.idx.data() + n * L;
        Complex prod = z[ix[0]];
        for (int l = 1; l < L; ++l) prod = cmul(prod, z[ix[l]]);
        const double c = tab.coef[n];
        acc[tab.out[n]] += Complex(c * prod.real(), c * prod.imag());
    }
}

inline Complex times_i(Complex a) { return {-a.imag(), a.real()}; }

}  // namespace detail

// Evaluates i * sum over table entries, i.e. the lattice version of N_l(T; z).
inline SpectralField apply_term_table(const TermTable& tab, const SpectralField& z) {
    const GridSpec& g = z.grid();
    SpectralField out(g);
    std::vector<Complex> acc(static_cast<std::size_t>(g.N), Complex(0.0, 0.0));
    detail::accumulate_entries(tab, z.data().data() + z.offset(), acc.data() + g.N / 2, 0, tab.size());
    for (int k = g.kmin(); k <= g.kmax(); ++k) out[k] = detail::times_i(acc[static_cast<std::size_t>(k + g.N / 2)]);
    return out;
}

inline SpectralField tree_nonlinearity(const Tree& t, int ell, const SpectralField& z, const RegionConfig& cfg) {
    return apply_term_table(build_term_table(t, term_kind_for(ell), z.grid(), cfg), z);
}

// Reference evaluator: every leaf tuple in lexicographic order, node
// frequencies checked against the lattice, multiplier evaluated directly.
inline SpectralField tree_nonlinearity_naive(const Tree& t, int ell, const SpectralField& z,
                                             const RegionConfig& cfg) {
    const TermKind kind = term_kind_for(ell);
    detail::check_term(t, kind);
    const GridSpec& g = z.grid();
    SolverConfig::check_resource(t.j(), g);
    const Region<double> reg(cfg);
    const TreeTypeTag tag = classify_tree(t);
    const int n = static_cast<int>(t.size());
    const int L = static_cast<int>(t.leaves().size());
    const double hj = detail::hpow(g.h, t.j());
    std::vector<int> leaf(L, g.kmin());
    std::vector<int> k(n);
    std::vector<double> v(n);
    std::vector<Complex> acc(static_cast<std::size_t>(g.N), Complex(0.0, 0.0));
    for (;;) {
        kernel::fill_from_leaves<int>(t, leaf, k);
        bool on_grid = true;
        for (int i = 0; i < n && on_grid; ++i) on_grid = g.in_range(k[i]);
        if (on_grid) {
            for (int i = 0; i < n; ++i) v[i] = g.xi(k[i]);
            const double m = detail::term_value(t, tag, kind, v, reg);
            Complex prod = z[leaf[0]];
            for (int l = 1; l < L; ++l) prod = detail::cmul(prod, z[leaf[l]]);
            const double c = hj * m;
            acc[static_cast<std::size_t>(k[0] + g.N / 2)] += Complex(c * prod.real(), c * prod.imag());
        }
        int pos = L - 1;
        while (pos >= 0 && leaf[pos] == g.kmax()) leaf[pos--] = g.kmin();
        if (pos < 0) break;
        ++leaf[pos];
    }
    SpectralField out(g);
    for (int kk = g.kmin(); kk <= g.kmax(); ++kk)
        out[kk] = detail::times_i(acc[static_cast<std::size_t>(kk + g.N / 2)]);
    return out;
}

// Every (tree, l) pair that enters the gauged equation truncated at order J.
inline std::vector<std::pair<Tree, int>> gauged_terms(int J) {
    std::vector<std::pair<Tree, int>> terms;
    terms.emplace_back(Tree::seedling(), 1);
    for (int j = 2; j <= J; ++j)
        for (const Tree& t : enumerate_trees(j)) {
            for (int ell = 2; ell <= 4; ++ell)
                if (admits(t, ell)) terms.emplace_back(t, ell);
        }
    return terms;
}

// Sum of all gauged nonlinearities up to order J, restricted to output bins
// k >= 0 and completed by conjugation; identically vanishing terms are dropped.
class GaugedRhs {
public:
    GaugedRhs(const GridSpec& g, int J, const RegionConfig& cfg) : grid_(g) {
        SolverConfig::check_resource(J, g);
        for (const auto& [t, ell] : gauged_terms(J)) {
            TermTable tab = build_term_table(t, term_kind_for(ell), g, cfg);
            ++terms_total_;
            if (tab.empty()) continue;
            TermTable half;
            half.tree = tab.tree;
            half.kind = tab.kind;
            half.leaves = tab.leaves;
            for (std::size_t e = 0; e < tab.size(); ++e) {
                if (tab.out[e] < 0) continue;
                half.out.push_back(tab.out[e]);
                half.idx.insert(half.idx.end(), tab.idx.begin() + e * tab.leaves,
                                tab.idx.begin() + (e + 1) * tab.leaves);
                half.coef.push_back(tab.coef[e]);
            }
            entries_ += half.size();
            tables_.push_back(std::move(half));
        }
    }

    std::size_t active_terms() const noexcept { return tables_.size(); }
    std::size_t total_terms() const noexcept { return terms_total_; }
    std::size_t entries() const noexcept { return entries_; }

    void operator()(const SpectralField& z, SpectralField& out) const {
        std::vector<Complex> acc(static_cast<std::size_t>(grid_.N), Complex(0.0, 0.0));
        Complex* a = acc.data() + grid_.N / 2;
        const Complex* zz = z.data().data() + z.offset();
        for (const auto& tab : tables_) detail::accumulate_entries(tab, zz, a, 0, tab.size());
        out.data()[0] = {0.0, 0.0};
        out[0] = {-a[0].imag(), 0.0};
        for (int k = 1; k <= grid_.kmax(); ++k) {
            out[k] = detail::times_i(a[k]);
            out[-k] = std::conj(out[k]);
        }
    }

private:
    GridSpec grid_;
    std::vector<TermTable> tables_;
    std::size_t terms_total_ = 0;
    std::size_t entries_ = 0;
};

// ---------------------------------------------------------------------------
// Time stepping

enum class RhsKind { kdv, gkdv };

namespace detail {

template <class Rhs>
Trajectory integrate_with(const SpectralField& u0, const SolverConfig& sc, Rhs&& rhs) {
    const GridSpec& g = u0.grid();
    const long steps = std::max(1L, static_cast<long>(std::ceil(sc.t_final / sc.dt - 1e-9)));
    const double dt = sc.t_final / static_cast<double>(steps);

    const std::size_t N = static_cast<std::size_t>(g.N);
    std::vector<Complex> E(N, Complex(1.0, 0.0)), Eh(N, Complex(1.0, 0.0));
    for (int k = g.kmin(); k <= g.kmax(); ++k) {
        const double w = std::pow(g.xi(k), 3);
        const std::size_t i = static_cast<std::size_t>(k + g.N / 2);
        E[i] = std::polar(1.0, w * dt);
        Eh[i] = std::polar(1.0, w * dt / 2);
    }
    E[0] = Eh[0] = {0.0, 0.0};

    SpectralField u = u0;
    u.data()[0] = {0.0, 0.0};
    u.hermitize();
    SpectralField k1(g), k2(g), k3(g), k4(g), tmp(g);

    Trajectory tr;
    tr.grid = g;
    auto record = [&](double t) {
        tr.times.push_back(t);
        tr.fields.push_back(u);
        tr.mass.push_back(mass_of(u));
        tr.momentum.push_back(momentum_of(u));
    };
    record(0.0);

    std::vector<long> marks;
    for (int c = 1; c <= sc.checkpoints; ++c) {
        const long m = std::lround(static_cast<double>(c) * steps / sc.checkpoints);
        if (m > 0 && (marks.empty() || m > marks.back())) marks.push_back(m);
    }
    std::size_t next_mark = 0;

    auto& ud = u.data();
    for (long s = 1; s <= steps; ++s) {
        rhs(u, k1);
        for (std::size_t i = 0; i < N; ++i) tmp.data()[i] = Eh[i] * (ud[i] + (dt / 2) * k1.data()[i]);
        rhs(tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp.data()[i] = Eh[i] * ud[i] + (dt / 2) * k2.data()[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp.data()[i] = E[i] * ud[i] + dt * (Eh[i] * k3.data()[i]);
        rhs(tmp, k4);
        double sup = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            ud[i] = E[i] * ud[i] + (dt / 6) * (E[i] * k1.data()[i] + 2.0 * (Eh[i] * (k2.data()[i] + k3.data()[i])) +
                                             k4.data()[i]);
            const double a = std::abs(ud[i]);
            finite = finite && std::isfinite(a);
            sup = std::max(sup, a);
        }
        // Keep the zero mode real and the field exactly Hermitian.
        u[0] = {u[0].real(), 0.0};
        for (int k = 1; k <= g.kmax(); ++k) u[-k] = std::conj(u[k]);
        if (!finite || sup > sc.blowup_threshold)
            throw InstabilityError("solution blew up at t = " + fmt17(s * dt) + " (sup |F| = " + fmt17(sup) + ")");
        if (next_mark < marks.size() && s == marks[next_mark]) {
            record(s == steps ? sc.t_final : s * dt);
            ++next_mark;
        }
    }
    return tr;
}

}  // namespace detail

inline Trajectory integrate(RhsKind kind, const SpectralField& u0, const SolverConfig& sc) {
    const GridSpec& g = u0.grid();
    if (kind == RhsKind::kdv) {
        SolverConfig plain = sc;
        plain.J = 1;
        plain.validate(g);
        return detail::integrate_with(u0, sc, [&](const SpectralField& u, SpectralField& out) {
            if (sc.dealias) {
                SpectralField v = u;
                detail::dealias_in_place(v);
                detail::kdv_rhs_hermitian(v, out);
                detail::dealias_in_place(out);
            } else {
                detail::kdv_rhs_hermitian(u, out);
            }
        });
    }
    sc.validate(g);
    const GaugedRhs rhs(g, sc.J, sc.region);
    return detail::integrate_with(u0, sc, [&](const SpectralField& z, SpectralField& out) { rhs(z, out); });
}

// ---------------------------------------------------------------------------
// Reference data

// Fourier density of -(3c/2) sech^2(sqrt(c)(x - c t)/2).
inline SpectralField soliton_field(const GridSpec& g, double c, double t) {
    if (!(c > 0.0)) throw DomainError("soliton speed must be positive");
    SpectralField f(g);
    const double rc = std::sqrt(c);
    for (int k = g.kmin(); k <= g.kmax(); ++k) {
        const double xi = g.xi(k);
        const double amp = (k == 0) ? -3.0 * rc / std::numbers::pi : -3.0 * xi / std::sinh(std::numbers::pi * xi / rc);
        f[k] = std::polar(amp, -xi * c * t);
    }
    return f;
}

// Smooth real field with F(xi) = delta * exp(-(xi/width)^2) * (phase), zero mean,
// scaled so that its sup norm equals delta exactly.
inline SpectralField smooth_field(const GridSpec& g, double delta, double width, double phase_shift = 0.7) {
    SpectralField f(g);
    for (int k = 1; k <= g.kmax(); ++k) {
        const double xi = g.xi(k);
        f.set_mode(k, std::polar(std::exp(-(xi / width) * (xi / width)) * xi / width, phase_shift * xi));
    }
    const double s = sup_norm(f);
    if (s > 0) f *= Complex(delta / s, 0.0);
    return f;
}

// ---------------------------------------------------------------------------
// Remainder and equivalence experiments

// FL^{s,p} norm of h^j sum_{A^c everywhere} Psi(T) m_B(T) prod v(leaves).
inline double remainder_norm(const SpectralField& v, const Tree& t, double s, double p, const RegionConfig& cfg) {
    const TermTable tab = build_term_table(t, TermKind::remainder, v.grid(), cfg);
    return fl_norm(apply_term_table(tab, v), s, p);
}

inline double remainder_sum(const SpectralField& v, int j, double s, double p, const RegionConfig& cfg) {
    double acc = 0.0;
    for (const Tree& t : enumerate_trees(j)) acc += remainder_norm(v, t, s, p, cfg);
    return acc;
}

struct EquivalenceReport {
    std::vector<int> J;
    std::vector<double> r;
    double r_ablation = 0.0;
    std::vector<double> times;
};

inline EquivalenceReport equivalence_experiment(const SpectralField& u0, const SolverConfig& sc,
                                                const std::vector<int>& J_list, bool with_ablation = true) {
    EquivalenceReport rep;
    rep.J = J_list;
    const Trajectory kdv = integrate(RhsKind::kdv, u0, sc);
    rep.times = kdv.times;
    std::vector<SpectralField> zref;
    zref.reserve(kdv.size());
    for (const auto& u : kdv.fields) zref.push_back(gauge_forward(u, sc.region));
    const SpectralField z0 = zref.front();
    for (int J : J_list) {
        SolverConfig c = sc;
        c.J = J;
        const Trajectory tz = integrate(RhsKind::gkdv, z0, c);
        double r = 0.0;
        for (std::size_t i = 0; i < tz.size(); ++i) r = std::max(r, sup_norm(zref[i] - tz.fields[i]));
        rep.r.push_back(r);
    }
    if (with_ablation) {
        SolverConfig c = sc;
        c.J = 1;
        const Trajectory tz = integrate(RhsKind::gkdv, u0, c);
        double r = 0.0;
        for (std::size_t i = 0; i < tz.size(); ++i) r = std::max(r, sup_norm(kdv.fields[i] - tz.fields[i]));
        rep.r_ablation = r;
    }
    return rep;
}

}  // namespace kdvnf
