#pragma once
// Frequency-restricted integrals
//     I(xi, alpha, M) = integral of weight * 1{|phase - alpha| < M},
// exponent fits of their suprema, and the two quantitative ill-posedness
// constructions.
//
// In every weight kind the phase is a quadratic polynomial in one chosen
// "inner" variable once the remaining "outer" variables are fixed. The inner
// integral is therefore computed exactly: the sublevel set comes from the
// roots of two quadratics, the region indicators are affine in the inner
// variable and contribute their own breakpoints, and the smooth weight is
// integrated by Gauss-Legendre on each resulting piece. Outer variables use
// a composite midpoint rule.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "kdvnf/errors.hpp"
#include "kdvnf/gauge.hpp"
#include "kdvnf/multiplier.hpp"
#include "kdvnf/parallel.hpp"
#include "kdvnf/spectral.hpp"

namespace kdvnf {

inline double resonance_phi(double xi, double xi1) { return -3.0 * xi * xi1 * (xi - xi1); }

enum class WeightKind { unit, bilinear_full, typeI_A, typeII, typeIII_cubic, typeIV_quartic };

inline std::string to_string(WeightKind k) {
    switch (k) {
        case WeightKind::unit: return "unit";
        case WeightKind::bilinear_full: return "bilinear_full";
        case WeightKind::typeI_A: return "typeI_A";
        case WeightKind::typeII: return "typeII";
        case WeightKind::typeIII_cubic: return "typeIII_cubic";
        case WeightKind::typeIV_quartic: return "typeIV_quartic";
    }
    return "?";
}

inline WeightKind parse_weight_kind(const std::string& s) {
    for (WeightKind k : {WeightKind::unit, WeightKind::bilinear_full, WeightKind::typeI_A, WeightKind::typeII,
                         WeightKind::typeIII_cubic, WeightKind::typeIV_quartic})
        if (to_string(k) == s) return k;
    throw ValidationError("weight", "unknown weight kind '" + s + "'");
}

struct QuadGrid {
    // Outer variables range over [-outer_extent, outer_extent].
    double outer_extent = 64.0;
    int outer_points = 512;
    // Inner variable box; the sublevel sets are bounded whenever the phase is
    // genuinely quadratic, so this only matters for degenerate slices.
    double inner_extent = 1e4;
    int gl_order = 8;
    // Plain Riemann sum in the inner variable instead of exact sublevel sets.
    bool riemann = false;
    double riemann_step = 1e-3;

    void validate() const {
        if (!(outer_extent > 0)) throw ValidationError("outer_extent", "must be positive");
        if (outer_points < 2) throw ValidationError("outer_points", "must be at least 2");
        if (!(inner_extent > 0)) throw ValidationError("inner_extent", "must be positive");
        if (gl_order < 1 || gl_order > 32) throw ValidationError("gl_order", "must lie in 1..32");
        if (riemann && !(riemann_step > 0)) throw ValidationError("riemann_step", "must be positive");
    }
};

namespace detail {

struct GaussLegendre {
    std::vector<double> x, w;
};

// Nodes and weights on [-1, 1] by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        g.x[i] = z;
        g.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return g;
}

inline const GaussLegendre& gl_cached(int n) {
    static const auto table = [] {
        std::vector<GaussLegendre> t(33);
        for (int k = 1; k <= 32; ++k) t[k] = gauss_legendre(k);
        return t;
    }();
    return table[n];
}

struct Affine {
    double p, q;  // p x + q
    double operator()(double x) const { return p * x + q; }
};

inline void push_root(std::vector<double>& out, Affine f) {
    if (f.p != 0.0) out.push_back(-f.q / f.p);
}

// Points where the stationary indicator of the pair (y1(x), y2(x)) can switch.
inline void stationary_breakpoints(std::vector<double>& out, Affine y1, Affine y2, const RegionConfig& cfg) {
    const double c = cfg.cstar, thr = cfg.low_threshold;
    push_root(out, y1);
    push_root(out, y2);
    for (double sg : {1.0, -1.0}) {
        push_root(out, {y1.p + sg * y2.p, y1.q + sg * y2.q});
        push_root(out, {(1 - c) * y1.p + sg * y2.p, (1 - c) * y1.q + sg * y2.q});
        push_root(out, {(1 - c) * y2.p + sg * y1.p, (1 - c) * y2.q + sg * y1.q});
        push_root(out, {y1.p, y1.q - sg * thr});
        push_root(out, {y2.p, y2.q - sg * thr});
    }
}

// Real roots of a x^2 + b x + c = 0.
inline void push_quadratic_roots(std::vector<double>& out, double a, double b, double c) {
    if (a == 0.0) {
        if (b != 0.0) out.push_back(-c / b);
        return;
    }
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + std::copysign(sq, b));
    if (qq != 0.0) {
        out.push_back(qq / a);
        out.push_back(c / qq);
    } else {
        out.push_back(0.0);
    }
}

// One inner slice: phase a x^2 + b x + c0, sublevel |phase - alpha| < M,
// extra indicator `ind` with breakpoints `bps`, smooth weight `w` on [lo, hi].
template <class Ind, class W>
double inner_integral(double a, double b, double c0, double alpha, double M, double lo, double hi,
                      std::vector<double>& bps, Ind&& ind, W&& w, const QuadGrid& q) {
    if (q.riemann) {
        double acc = 0.0;
        const long n = static_cast<long>(std::ceil((hi - lo) / q.riemann_step));
        const double dx = (hi - lo) / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            const double x = lo + (i + 0.5) * dx;
            const double ph = (a * x + b) * x + c0;
            if (std::abs(ph - alpha) < M && ind(x)) acc += w(x);
        }
        return acc * dx;
    }
    push_quadratic_roots(bps, a, b, c0 - alpha - M);
    push_quadratic_roots(bps, a, b, c0 - alpha + M);
    bps.push_back(lo);
    bps.push_back(hi);
    std::sort(bps.begin(), bps.end());
    const GaussLegendre& gl = gl_cached(q.gl_order);
    double acc = 0.0;
    double prev = lo;
    for (double xb : bps) {
        if (!(xb > prev)) continue;
        const double right = std::min(xb, hi);
        if (right <= prev) continue;
        const double mid = 0.5 * (prev + right);
        const double ph = (a * mid + b) * mid + c0;
        if (std::abs(ph - alpha) < M && ind(mid)) {
            // Panels no longer than 1 + |x|/4 keep the weight well resolved.
            double x0 = prev;
            while (x0 < right) {
                const double len = std::min(right - x0, 1.0 + 0.25 * std::min(std::abs(x0), std::abs(right)));
                const double x1 = (right - x0 - len < 1e-12 * len) ? right : x0 + len;
                const double hm = 0.5 * (x1 - x0), cm = 0.5 * (x1 + x0);
                for (std::size_t i = 0; i < gl.x.size(); ++i) acc += hm * gl.w[i] * w(cm + hm * gl.x[i]);
                x0 = x1;
            }
        }
        prev = right;
        if (prev >= hi) break;
    }
    return acc;
}

inline double jpow(double x, double e) { return std::pow(1.0 + x * x, 0.5 * e); }

// Composite midpoint over [-X, X] split at the given breakpoints.
template <class F>
double outer_midpoint(double X, int points, std::vector<double> bps, F&& f) {
    bps.push_back(-X);
    bps.push_back(X);
    std::sort(bps.begin(), bps.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double l = std::max(bps[i], -X), r = std::min(bps[i + 1], X);
        if (!(r > l)) continue;
        const int n = std::max(2, static_cast<int>(std::ceil(points * (r - l) / (2 * X))));
        const double dx = (r - l) / n;
        for (int k = 0; k < n; ++k) acc += dx * f(l + (k + 0.5) * dx);
    }
    return acc;
}

}  // namespace detail

inline double fre_integral(WeightKind kind, double s, double xi, double alpha, double M, const QuadGrid& q,
                           const RegionConfig& cfg = RegionConfig{}) {
    q.validate();
    if (!(M >= 1.0)) throw DomainError("fre_integral: M must be at least 1");
    if (q.riemann) {
        const double Xi = std::max({std::abs(xi), q.outer_extent, 1.0});
        if (q.riemann_step > M / (100.0 * Xi * Xi))
            throw ResolutionError("fre_integral: Riemann step " + fmt17(q.riemann_step) +
                                  " does not resolve the sublevel set (need <= " + fmt17(M / (100.0 * Xi * Xi)) + ")");
    }
    const Region<double> reg(cfg);
    const double B = q.inner_extent;
    std::vector<double> bps;
    bps.reserve(32);

    switch (kind) {
        case WeightKind::unit:
        case WeightKind::bilinear_full:
        case WeightKind::typeI_A: {
            // Inner xi1, xi2 = xi - xi1, phase 3 xi xi1^2 - 3 xi^2 xi1.
            const double jx = detail::jpow(xi, s);
            auto w = [&](double x1) {
                if (kind == WeightKind::unit) return 1.0;
                return std::abs(xi) * jx / (detail::jpow(x1, s) * detail::jpow(xi - x1, s));
            };
            if (kind == WeightKind::typeI_A) {
                detail::stationary_breakpoints(bps, {1, 0}, {-1, xi}, cfg);
                return detail::inner_integral(
                    3 * xi, -3 * xi * xi, 0.0, alpha, M, -B, B, bps,
                    [&](double x1) { return !reg.stationary(x1, xi - x1); }, w, q);
            }
            return detail::inner_integral(3 * xi, -3 * xi * xi, 0.0, alpha, M, -B, B, bps, [](double) { return true; },
                                          w, q);
        }
        case WeightKind::typeII: {
            // Tree {root,1,2,11,12}: outer xi2, inner xi11; xi1 = xi - xi2.
            std::vector<double> obps;
            detail::stationary_breakpoints(obps, {-1, xi}, {1, 0}, cfg);
            const double xi3 = xi * xi * xi;
            return detail::outer_midpoint(q.outer_extent, q.outer_points, obps, [&](double x2) {
                const double c = xi - x2;
                if (!reg.stationary(c, x2) || c == 0.0) return 0.0;
                const double a = 3 * c, b = -3 * c * c, c0 = -xi3 + x2 * x2 * x2 + c * c * c;
                const double outer_w = 1.0 / detail::jpow(x2, s + 1);
                std::vector<double> ib;
                ib.reserve(32);
                detail::stationary_breakpoints(ib, {1, 0}, {-1, c}, cfg);
                return outer_w * detail::inner_integral(
                                     a, b, c0, alpha, M, -B, B, ib,
                                     [&](double x11) { return !reg.stationary(x11, c - x11); },
                                     [&](double x11) {
                                         return 1.0 / (detail::jpow(x11, s) * detail::jpow(c - x11, s));
                                     },
                                     q);
            });
        }
        case WeightKind::typeIII_cubic: {
            // Same tree: outer xi11, inner xi2; xi12 = c - xi2 with c = xi - xi11.
            const double xi3 = xi * xi * xi;
            return detail::outer_midpoint(q.outer_extent, q.outer_points, {}, [&](double x11) {
                const double c = xi - x11;
                if (c == 0.0) return 0.0;
                const double a = 3 * c, b = -3 * c * c, c0 = -xi3 + x11 * x11 * x11 + c * c * c;
                const double outer_w = std::abs(xi) / detail::jpow(x11, s + 1);
                std::vector<double> ib;
                ib.reserve(32);
                detail::stationary_breakpoints(ib, {0, x11}, {-1, c}, cfg);
                return outer_w * detail::inner_integral(
                                     a, b, c0, alpha, M, -B, B, ib,
                                     [&](double x2) { return reg.stationary(x11, c - x2); },
                                     [&](double x2) {
                                         return 1.0 / (detail::jpow(c - x2, s + 1) * detail::jpow(x2, s));
                                     },
                                     q);
            });
        }
        case WeightKind::typeIV_quartic: {
            // Tree {root,1,2,11,12,21,22}: outer (xi11, xi21), inner xi12;
            // xi22 = c - xi12 with c = xi - xi11 - xi21.
            const double xi3 = xi * xi * xi;
            const double X = q.outer_extent;
            const int n = q.outer_points;
            const double dx = 2 * X / n;
            double acc = 0.0;
            std::vector<double> ib;
            ib.reserve(32);
            for (int i = 0; i < n; ++i) {
                const double x11 = -X + (i + 0.5) * dx;
                const double w11 = 1.0 / detail::jpow(x11, 2 * s + 2);
                double row = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double x21 = -X + (k + 0.5) * dx;
                    const double c = xi - x11 - x21;
                    if (c == 0.0) continue;
                    const double a = 3 * c, b = -3 * c * c;
                    const double c0 = -xi3 + x11 * x11 * x11 + x21 * x21 * x21 + c * c * c;
                    ib.clear();
                    detail::stationary_breakpoints(ib, {0, x11}, {1, 0}, cfg);
                    detail::stationary_breakpoints(ib, {0, x21}, {-1, c}, cfg);
                    const double len = detail::inner_integral(
                        a, b, c0, alpha, M, -B, B, ib,
                        [&](double x12) { return reg.stationary(x11, x12) && reg.stationary(x21, c - x12); },
                        [](double) { return 1.0; }, q);
                    if (len != 0.0) row += len / detail::jpow(x21, 2 * s + 2);
                }
                acc += w11 * row;
            }
            return std::abs(xi) * acc * dx * dx;
        }
    }
    return 0.0;
}

// Measure of {q in [-1,1] : |q^2 - alpha| < M}.
inline double quadratic_sublevel_measure(double alpha, double M) {
    std::vector<double> bps;
    QuadGrid q;
    q.gl_order = 1;
    return detail::inner_integral(1.0, 0.0, 0.0, alpha, M, -1.0, 1.0, bps, [](double) { return true; },
                                  [](double) { return 1.0; }, q);
}

// ---------------------------------------------------------------------------

struct ExponentSample {
    double alpha = 0, M = 0, value = 0, argmax_xi = 0;
};

struct ExponentFit {
    WeightKind kind = WeightKind::unit;
    double s = 0;
    double beta = 0, lambda = 0, intercept = 0;
    // 1 - R^2 of the least-squares fit in log space.
    double residual = 0;
    std::optional<double> claim_beta, claim_lambda;
    std::vector<ExponentSample> samples;
    std::vector<double> xi_list;
};

inline std::pair<std::optional<double>, std::optional<double>> claimed_exponents(WeightKind k, double s) {
    switch (k) {
        case WeightKind::bilinear_full: return {0.75, 1.0 / 6.0 - s / 3.0};
        case WeightKind::typeI_A:
        case WeightKind::typeII:
        case WeightKind::typeIII_cubic:
        case WeightKind::typeIV_quartic: return {1.0, 0.0};
        case WeightKind::unit: return {std::nullopt, std::nullopt};
    }
    return {std::nullopt, std::nullopt};
}

struct LogLinearFit {
    Eigen::VectorXd coef;
    double residual = 0;  // 1 - R^2
};

// Least squares for log y = X coef; columns of X are given explicitly.
inline LogLinearFit fit_log_linear(const Eigen::MatrixXd& X, const std::vector<double>& y) {
    if (static_cast<std::size_t>(X.rows()) != y.size() || X.rows() <= X.cols())
        throw DegenerateRegressionError("regression needs more samples than parameters");
    Eigen::VectorXd ly(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (!(y[i] > 0) || !std::isfinite(y[i]))
            throw DegenerateRegressionError("regression needs positive finite values (sample " + std::to_string(i) +
                                            " is " + fmt17(y[i]) + ")");
        ly[i] = std::log(y[i]);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < X.cols()) throw DegenerateRegressionError("design matrix is rank deficient");
    LogLinearFit f;
    f.coef = qr.solve(ly);
    const Eigen::VectorXd res = ly - X * f.coef;
    const double mean = ly.mean();
    const double sst = (ly.array() - mean).square().sum();
    f.residual = sst > 0 ? res.squaredNorm() / sst : 0.0;
    return f;
}

inline void require_dyadic(const std::vector<double>& Ms) {
    for (double m : Ms) {
        int e = 0;
        if (!(m >= 1) || std::frexp(m, &e) != 0.5) throw ValidationError("M_list", "values must be powers of two >= 1");
    }
}

inline ExponentFit fit_exponents(WeightKind kind, double s, const std::vector<double>& M_list,
                                 const std::vector<double>& alpha_list, const std::vector<double>& xi_list,
                                 const QuadGrid& q, const RegionConfig& cfg = RegionConfig{}) {
    if (M_list.size() < 4) throw ValidationError("M_list", "need at least 4 values");
    if (alpha_list.size() < 4) throw ValidationError("alpha_list", "need at least 4 values");
    if (xi_list.empty()) throw ValidationError("xi_list", "must not be empty");
    require_dyadic(M_list);
    const std::size_t nA = alpha_list.size(), nM = M_list.size(), nX = xi_list.size();
    std::vector<double> vals(nA * nM * nX);
    parallel_for(vals.size(), [&](std::size_t u) {
        const std::size_t ix = u % nX, im = (u / nX) % nM, ia = u / (nX * nM);
        vals[u] = fre_integral(kind, s, xi_list[ix], alpha_list[ia], M_list[im], q, cfg);
    });
    ExponentFit fit;
    fit.kind = kind;
    fit.s = s;
    fit.xi_list = xi_list;
    std::tie(fit.claim_beta, fit.claim_lambda) = claimed_exponents(kind, s);
    for (std::size_t ia = 0; ia < nA; ++ia)
        for (std::size_t im = 0; im < nM; ++im) {
            ExponentSample smp{alpha_list[ia], M_list[im], -1.0, 0.0};
            for (std::size_t ix = 0; ix < nX; ++ix) {
                const double v = vals[(ia * nM + im) * nX + ix];
                if (v > smp.value) {
                    smp.value = v;
                    smp.argmax_xi = xi_list[ix];
                }
            }
            fit.samples.push_back(smp);
        }
    Eigen::MatrixXd X(fit.samples.size(), 3);
    std::vector<double> y;
    for (std::size_t i = 0; i < fit.samples.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = std::log(fit.samples[i].M);
        X(i, 2) = std::log(japanese(fit.samples[i].alpha));
        y.push_back(fit.samples[i].value);
    }
    const LogLinearFit f = fit_log_linear(X, y);
    fit.intercept = f.coef[0];
    fit.beta = f.coef[1];
    fit.lambda = f.coef[2];
    fit.residual = f.residual;
    return fit;
}

// The sample design used by the command line and the acceptance checks:
// dyadic M from 1 to 1024, four alpha values, and a xi list that is log-spaced
// in |xi| from 1/2 to 32 and symmetric in sign (I(-xi, alpha) = I(xi, -alpha),
// so both signs are needed for the supremum over the real line).
struct EstimateDesign {
    std::vector<double> M_list, alpha_list, xi_list;
    QuadGrid quad;
};

inline double default_s(WeightKind k) {
    switch (k) {
        case WeightKind::bilinear_full: return -0.2;
        case WeightKind::typeI_A:
        case WeightKind::typeII:
        case WeightKind::typeIII_cubic: return -0.6;
        case WeightKind::typeIV_quartic: return -0.7;
        case WeightKind::unit: return 0.0;
    }
    return 0.0;
}

inline EstimateDesign default_estimate_design(int outer_points = 256) {
    EstimateDesign d;
    for (int e = 0; e <= 10; ++e) d.M_list.push_back(std::ldexp(1.0, e));
    d.alpha_list = {0.0, 16.0, 256.0, 4096.0};
    for (int e = -4; e <= 20; ++e) {
        const double x = std::pow(2.0, e / 4.0);
        d.xi_list.push_back(-x);
        d.xi_list.push_back(x);
    }
    d.quad.outer_extent = 64.0;
    d.quad.outer_points = outer_points;
    return d;
}

// Slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    Eigen::MatrixXd X(x.size(), 2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = std::log(x[i]);
    }
    return fit_log_linear(X, y).coef[1];
}

// ---------------------------------------------------------------------------
// Ill-posedness constructions

struct Picard3Row {
    double N = 0, value = 0;
};

struct Picard3Table {
    double s = 0, c = 0, slope = 0;
    std::vector<Picard3Row> rows;
};

inline constexpr double picard3_default_c = 0.02;

// (2/3) N^{-3s} | double integral at xi = 0 of (e^{itPsi} - 1)/Psi *
// (1/xi2 + 1/xi11 + 1/xi12) over xi11 near 3N/2, xi12 near 5N/2,
// xi2 = -(xi11 + xi12) near -4N |, with t = c N^{-3}.
inline double picard3_value(double s, double N, double c, int gl = 16, int panels = 8) {
    const double t = c / (N * N * N);
    const auto& g = detail::gl_cached(gl);
    const double a0 = 1.5 * N - N / 100, a1 = 1.5 * N + N / 100;
    const double b0 = 2.5 * N - N / 100, b1 = 2.5 * N + N / 100;
    const double w0 = -4 * N - N / 10, w1 = -4 * N + N / 10;
    std::complex<double> acc(0.0, 0.0);
    const double ha = (a1 - a0) / panels, hb = (b1 - b0) / panels;
    for (int pa = 0; pa < panels; ++pa)
        for (int pb = 0; pb < panels; ++pb)
            for (int i = 0; i < gl; ++i) {
                const double x11 = a0 + ha * (pa + 0.5 + 0.5 * g.x[i]);
                for (int k = 0; k < gl; ++k) {
                    const double x12 = b0 + hb * (pb + 0.5 + 0.5 * g.x[k]);
                    const double x2 = -(x11 + x12);
                    if (x2 < w0 || x2 > w1) continue;
                    const double psi = -3.0 * x11 * x12 * (x11 + x12);
                    const std::complex<double> osc = std::polar(1.0, t * psi) - 1.0;
                    const double lin = 1.0 / x2 + 1.0 / x11 + 1.0 / x12;
                    acc += (0.25 * ha * hb * g.w[i] * g.w[k]) * osc / psi * lin;
                }
            }
    return (2.0 / 3.0) * std::pow(N, -3.0 * s) * std::abs(acc);
}

inline Picard3Table picard3_experiment(double s, const std::vector<double>& N_list, double c = picard3_default_c) {
    if (N_list.size() < 4) throw ValidationError("N_list", "need at least 4 values");
    if (!(c > 0)) throw ValidationError("c", "must be positive");
    Picard3Table tab;
    tab.s = s;
    tab.c = c;
    tab.rows.resize(N_list.size());
    parallel_for(N_list.size(), [&](std::size_t i) { tab.rows[i] = {N_list[i], picard3_value(s, N_list[i], c)}; });
    std::vector<double> x, y;
    for (const auto& r : tab.rows) {
        x.push_back(r.N);
        y.push_back(r.value);
    }
    tab.slope = loglog_slope(x, y);
    return tab;
}

inline std::complex<double> theta_limit(double xi) {
    if (std::abs(xi) < 1e-4) {
        // Taylor series of (e^{4i xi} - e^{2i xi}) / (3 i xi) around 0.
        const std::complex<double> ix(0.0, xi);
        return (2.0 + 6.0 * ix + (28.0 / 3.0) * ix * ix) / 3.0;
    }
    const std::complex<double> i(0.0, 1.0);
    return (std::exp(4.0 * i * xi) - std::exp(2.0 * i * xi)) / (3.0 * i * xi);
}

// u_{0,N} with F(xi) = N^{-1/2} e^{i xi^2 / N} on [N, 2N] and its mirror.
inline SpectralField miura_sequence_datum(const GridSpec& g, double N) {
    SpectralField f(g);
    for (int k = 1; k <= g.kmax(); ++k) {
        const double xi = g.xi(k);
        if (xi >= N && xi <= 2 * N) f.set_mode(k, std::polar(1.0 / std::sqrt(N), xi * xi / N));
    }
    return f;
}

struct MiuraRow {
    double N = 0, distance = 0, norm_u0 = 0;
};

struct MiuraTable {
    double s = 0, p = 0, window = 0, h = 0;
    std::vector<MiuraRow> rows;
};

inline MiuraTable miura_sequence_experiment(double s, double p, const std::vector<double>& N_list, double h = 0.125,
                                            double window = 4.0) {
    if (N_list.empty()) throw ValidationError("N_list", "must not be empty");
    MiuraTable tab;
    tab.s = s;
    tab.p = p;
    tab.window = window;
    tab.h = h;
    for (double N : N_list) {
        if (!(N > window)) throw DomainError("miura_sequence: N must exceed the window");
        // Smallest power-of-two grid that holds [-2N, 2N].
        int modes = 16;
        while ((modes / 2 - 1) * h < 2 * N) modes *= 2;
        const GridSpec g(modes, h);
        if (window > g.max_frequency()) throw GridMismatchError("miura_sequence: window exceeds the grid");
        const SpectralField u0 = miura_sequence_datum(g, N);
        const SpectralField m = miura_map(u0);
        double acc = 0.0;
        for (int k = g.kmin(); k <= g.kmax(); ++k) {
            const double xi = g.xi(k);
            if (std::abs(xi) > window) continue;
            const double d = std::pow(japanese(xi), s) * std::abs(m[k] - theta_limit(xi));
            acc = std::isinf(p) ? std::max(acc, d) : acc + std::pow(d, p);
        }
        const double dist = std::isinf(p) ? acc : std::pow(h * acc, 1.0 / p);
        tab.rows.push_back({N, dist, fl_norm(u0, 0.0, 2.0)});
    }
    return tab;
}

}  // namespace kdvnf
