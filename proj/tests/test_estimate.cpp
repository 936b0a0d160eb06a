#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdvnf/estimate.hpp"

using namespace kdvnf;

TEST_CASE("resonance function") {
    CHECK(resonance_phi(3, 1) == -18);
    CHECK(resonance_phi(2.5, 0) == 0);
    CHECK(resonance_phi(2.5, 2.5) == 0);
}

TEST_CASE("unit weight reproduces the cubic sublevel set measure") {
    QuadGrid q;
    const double v = fre_integral(WeightKind::unit, 0.0, 3.0, 0.0, 1.0, q);
    CHECK(v == doctest::Approx((std::sqrt(85.0) - std::sqrt(77.0)) / 3.0).epsilon(1e-12));
}

TEST_CASE("saturated indicator gives the unrestricted integral") {
    QuadGrid q;
    q.inner_extent = 10.0;
    // |Phi| <= 3*3*10*13 < 2^12 on the box.
    CHECK(fre_integral(WeightKind::unit, 0.0, 3.0, 0.0, 4096.0, q) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("exact and Riemann inner integration agree") {
    QuadGrid exact;
    exact.outer_extent = 4.0;
    exact.inner_extent = 4.0;
    QuadGrid riem = exact;
    riem.riemann = true;
    riem.riemann_step = 2e-4;
    for (WeightKind k : {WeightKind::bilinear_full, WeightKind::typeI_A}) {
        const double a = fre_integral(k, -0.2, 1.5, 2.0, 8.0, exact);
        const double b = fre_integral(k, -0.2, 1.5, 2.0, 8.0, riem);
        CHECK(a > 0);
        CHECK(b == doctest::Approx(a).epsilon(1e-3));
    }
    riem.riemann_step = 0.1;
    CHECK_THROWS_AS(fre_integral(WeightKind::unit, 0.0, 1.5, 2.0, 8.0, riem), ResolutionError);
    CHECK_THROWS_AS(fre_integral(WeightKind::unit, 0.0, 1.5, 2.0, 0.5, exact), DomainError);
}

TEST_CASE("type II values stay finite over the sample design") {
    EstimateDesign d = default_estimate_design(64);
    for (double xi : {-8.0, -1.0, 0.5, 2.0, 16.0})
        for (double a : d.alpha_list) {
            const double v = fre_integral(WeightKind::typeII, -0.6, xi, a, 4.0, d.quad);
            CHECK(std::isfinite(v));
            CHECK(v >= 0.0);
        }
}

TEST_CASE("quadratic sublevel sets are at most three root M") {
    for (double a : {-1.0, 0.0, 0.01, 0.25, 0.5, 1.0, 3.0})
        for (double M : {1e-6, 1e-4, 1e-2, 0.1, 1.0}) CHECK(quadratic_sublevel_measure(a, M) <= 3.0 * std::sqrt(M));
    CHECK(quadratic_sublevel_measure(0.0, 0.01) == doctest::Approx(0.2));
}

TEST_CASE("log-linear fit") {
    // Constant data: beta and lambda vanish.
    QuadGrid q;
    q.inner_extent = 1.0;
    const auto f = fit_exponents(WeightKind::unit, 0.0, {1024, 2048, 4096, 8192}, {0, 1, 2, 3}, {1.0}, q);
    CHECK(std::abs(f.beta) < 1e-12);
    CHECK(std::abs(f.lambda) < 1e-12);
    CHECK(!f.claim_beta);

    Eigen::MatrixXd X(5, 2);
    std::vector<double> y;
    for (int i = 0; i < 5; ++i) {
        X(i, 0) = 1;
        X(i, 1) = std::log(double(i + 1));
        y.push_back(3.0 * std::pow(i + 1.0, 0.75));
    }
    const auto r = fit_log_linear(X, y);
    CHECK(r.coef[1] == doctest::Approx(0.75));
    CHECK(r.residual < 1e-20);

    y[2] = 0.0;
    CHECK_THROWS_AS(fit_log_linear(X, y), DegenerateRegressionError);
    X.col(1).setConstant(1.0);
    y[2] = 1.0;
    CHECK_THROWS_AS(fit_log_linear(X, y), DegenerateRegressionError);
    CHECK_THROWS_AS(require_dyadic({1, 2, 3, 4}), ValidationError);
    CHECK_THROWS_AS(fit_exponents(WeightKind::unit, 0.0, {1, 2, 4}, {0, 1, 2, 3}, {1.0}, q), ValidationError);
}

TEST_CASE("claimed exponents") {
    const auto [b, l] = claimed_exponents(WeightKind::bilinear_full, -0.2);
    CHECK(*b == 0.75);
    CHECK(*l == doctest::Approx(1.0 / 6.0 + 0.2 / 3.0));
    CHECK(parse_weight_kind("typeIV_quartic") == WeightKind::typeIV_quartic);
    CHECK_THROWS_AS(parse_weight_kind("typeV"), ValidationError);
}

TEST_CASE("third Picard iterate") {
    const std::vector<double> Ns{8, 16, 32, 64, 128};
    for (double s : {-0.8, -2.0 / 3.0, -0.5}) {
        const auto t = picard3_experiment(s, Ns);
        CHECK(std::abs(t.slope - (-3 * s - 2)) <= 0.15);
    }
    CHECK_THROWS_AS(picard3_experiment(-0.5, {8, 16, 32}), ValidationError);
}

TEST_CASE("limit profile near zero") {
    CHECK(std::abs(theta_limit(0.0) - Complex(2.0 / 3.0, 0.0)) < 1e-15);
    const double e = 1e-4;
    CHECK(std::abs(theta_limit(e * 0.999) - theta_limit(e * 1.001)) < 1e-6);
}

TEST_CASE("Miura sequence") {
    const auto t = miura_sequence_experiment(-0.8, 4.0, {8, 16, 32, 64});
    double lo = INFINITY, hi = 0;
    for (const auto& r : t.rows) {
        lo = std::min(lo, r.norm_u0);
        hi = std::max(hi, r.norm_u0);
    }
    CHECK(hi / lo <= 2.0);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].distance < t.rows[i - 1].distance);
}

TEST_CASE("data norm scaling along the sequence") {
    const GridSpec g(2048, 0.125);
    const double s = -0.3, p = 4.0;
    const double r = fl_norm(miura_sequence_datum(g, 64), s, p) / fl_norm(miura_sequence_datum(g, 8), s, p);
    const double predicted = std::pow(8.0, -0.5 + s + 1.0 / p);
    CHECK(r / predicted <= 2.0);
    CHECK(predicted / r <= 2.0);
}
