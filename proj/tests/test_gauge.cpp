#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "kdvnf/gauge.hpp"
#include "kdvnf/rng.hpp"

using namespace kdvnf;

namespace {

const RegionConfig paper(0.1);

SpectralField pair_field(const GridSpec& g, int k0, Complex amp) {
    SpectralField f(g);
    f.set_mode(k0, amp);
    return f;
}

SpectralField random_field(const GridSpec& g, double norm, std::uint64_t seed) {
    Rng rng(seed);
    SpectralField f(g);
    for (int k = 1; k <= g.kmax(); ++k) f.set_mode(k, std::polar(rng.uniform(), 2 * std::numbers::pi * rng.uniform()));
    f *= Complex(norm / sup_norm(f), 0.0);
    return f;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec(5, 0.25), ValidationError);
    CHECK_THROWS_AS(GridSpec(2, 0.25), ValidationError);
    CHECK_THROWS_AS(GridSpec(16, 0.5), ValidationError);
    CHECK_THROWS_AS(GridSpec(16, 0.0), ValidationError);
    const GridSpec g(16, 0.25);
    CHECK(g.kmin() == -7);
    CHECK(g.kmax() == 7);
    CHECK(g.xi(3) == 0.75);
}

TEST_CASE("fl norm basics") {
    const GridSpec g(16, 0.25);
    SpectralField f(g);
    CHECK(fl_norm(f, 0.5, 2.0) == 0.0);
    f[0] = 1.0;
    for (double s : {-1.0, 0.0, 0.7}) CHECK(fl_norm(f, s, std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(fl_norm(f, 0.0, 2.0) == doctest::Approx(std::sqrt(0.25)));
}

TEST_CASE("adding fields on different grids fails") {
    SpectralField a(GridSpec(16, 0.25)), b(GridSpec(32, 0.25));
    CHECK_THROWS_AS(a + b, GridMismatchError);
}

TEST_CASE("bilinear correction on zero input") {
    const SpectralField z(GridSpec(32, 0.25));
    CHECK(apply_D(z, z, paper).is_zero());
    CHECK(gauge_inverse(z, paper).is_zero());
    CHECK(miura_map(z).is_zero());
}

TEST_CASE("bilinear correction on a single conjugate pair") {
    const GridSpec g(64, 0.25);
    const int k0 = 8;
    const double x0 = g.xi(k0);
    const Complex A(0.3, -0.2);
    const SpectralField f = pair_field(g, k0, A);
    const SpectralField d = apply_D(f, f, paper);
    CHECK(std::abs(d[2 * k0] - (-(g.h / 3.0) * A * A / (x0 * x0))) < 1e-15);
    // Output at zero collects (x0,-x0) and (-x0,x0).
    const Complex zero_expected = -(g.h / 3.0) * 2.0 * A * std::conj(A) / (-x0 * x0);
    CHECK(std::abs(d[0] - zero_expected) < 1e-15);
    int support = 0;
    for (int k = g.kmin(); k <= g.kmax(); ++k) support += d[k] != Complex(0.0, 0.0);
    CHECK(support == 3);
    CHECK(d.is_hermitian(1e-15));

    const SpectralField gi = gauge_inverse(f, paper);
    CHECK(max_abs_diff(gi, f + d) == 0.0);
}

TEST_CASE("frequencies of different size do not interact") {
    const GridSpec g(64, 0.25);
    SpectralField a = pair_field(g, 8, {0.1, 0.0});
    SpectralField b = pair_field(g, 20, {0.2, 0.1});
    const SpectralField cross = apply_D(a, b, paper);
    CHECK(cross.is_zero());
    const SpectralField both = apply_D(a + b, a + b, paper);
    CHECK(max_abs_diff(both, apply_D(a, a, paper) + apply_D(b, b, paper)) < 1e-16);
}

TEST_CASE("gauge correction is quadratic") {
    const GridSpec g(64, 0.25);
    const SpectralField z = random_field(g, 1.0, 3);
    const double c1 = fl_norm(gauge_inverse(1e-2 * z, paper) - 1e-2 * z, 0.0, INFINITY) / 1e-4;
    const double c2 = fl_norm(gauge_inverse(1e-3 * z, paper) - 1e-3 * z, 0.0, INFINITY) / 1e-6;
    CHECK(c1 > 0.0);
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-9));
    // Also with a negative regularity index above -1/2.
    const double c3 = fl_norm(gauge_inverse(1e-2 * z, paper) - 1e-2 * z, -0.4, INFINITY) / 1e-4;
    CHECK(c3 <= c1);
}

TEST_CASE("forward gauge") {
    const GridSpec g(128, 0.25);
    const SpectralField zero(g);
    const GaugeSolve s0 = gauge_forward_detailed(zero, paper);
    CHECK(s0.iterations == 1);
    CHECK(s0.w.is_zero());

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SpectralField f = random_field(g, 0.05, seed);
        CHECK(max_abs_diff(gauge_forward(gauge_inverse(f, paper), paper), f) <= 1e-10);
        CHECK(max_abs_diff(gauge_inverse(gauge_forward(f, paper), paper), f) <= 1e-10);
    }
    CHECK_THROWS_AS(gauge_forward_detailed(random_field(g, 0.05, 1), paper, 1e-30, 2), ConvergenceError);
    CHECK_THROWS_AS(gauge_forward_detailed(random_field(g, 1000.0, 1), paper), DataTooLargeError);
    CHECK_THROWS_AS(gauge_forward_detailed(zero, paper, 0.0), ValidationError);
}

TEST_CASE("empty region reproduces the Miura antiderivative") {
    const GridSpec g(64, 0.25);
    const SpectralField z = random_field(g, 0.3, 9);
    const SpectralField a = gauge_inverse(z, RegionConfig::empty());
    const SpectralField b = miura_antideriv(z);
    CHECK(max_abs_diff(a, b) == 0.0);

    const int k0 = 8;
    const Complex A(0.5, 0.1);
    const SpectralField p = pair_field(g, k0, A);
    const double x0 = g.xi(k0);
    CHECK(std::abs(miura_antideriv(p)[2 * k0] - (-(g.h / 3.0) * A * A / (x0 * x0))) < 1e-15);
}

TEST_CASE("Miura map of a pair") {
    const GridSpec g(32, 0.25);
    const Complex A(0.5, 0.0);
    const SpectralField p = pair_field(g, 4, A);
    const SpectralField m = miura_map(p);
    CHECK(std::abs(m[4] - Complex(0.0, 1.0) * A) < 1e-15);
    CHECK(std::abs(m[8] - (g.h / 3.0) * A * A) < 1e-15);
    CHECK(std::abs(m[0] - (g.h / 3.0) * 2.0 * A * std::conj(A)) < 1e-15);
}

TEST_CASE("scaling map") {
    const GridSpec g(64, 0.25);
    const SpectralField f = random_field(g, 1.0, 1);
    CHECK(max_abs_diff(scaling_map(f, Ratio(1, 1)), f) == 0.0);

    const SpectralField p = pair_field(g, 5, {0.3, 0.4});
    const SpectralField s = scaling_map(p, Ratio(2, 1));
    CHECK(s[10] == 2.0 * p[5]);
    CHECK(s[-10] == 2.0 * p[-5]);
    CHECK(fl_norm(s, 0.0, INFINITY) == doctest::Approx(2.0 * fl_norm(p, 0.0, INFINITY)));

    CHECK_THROWS_AS(scaling_map(p, Ratio(1, 2)), DomainError);   // 5/2 is off the lattice
    CHECK_THROWS_AS(scaling_map(f, Ratio(2, 1)), DomainError);   // leaves the grid
    CHECK_THROWS_AS(Ratio(-1, 2), DomainError);
    CHECK(max_abs_diff(scaling_map(scaling_map(p, Ratio(2, 1)), Ratio(1, 2)), p) == 0.0);
}

TEST_CASE("field CSV round trip and error lines") {
    const GridSpec g(16, 0.125);
    const SpectralField f = random_field(g, 0.7, 4);
    std::stringstream ss;
    write_field_csv(ss, f);
    const SpectralField back = read_field_csv(ss);
    CHECK(back.grid() == g);
    CHECK(max_abs_diff(back, f) == 0.0);

    std::istringstream bad("# N=16 h=0.125\nk,re,im\n0,0,0\n1,abc,0\n");
    try {
        read_field_csv(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
    }
}
