#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdvnf/report.hpp"
#include "kdvnf/verify.hpp"

using namespace kdvnf;

namespace {

CampaignOptions small(int j_max, int trials, std::vector<double> cstars = {0.1}) {
    CampaignOptions o;
    o.j_max = j_max;
    o.trials = trials;
    o.regions.clear();
    for (double c : cstars) o.regions.emplace_back(c);
    return o;
}

}  // namespace

TEST_CASE("pair cancellation on order two") {
    const auto r = verify_pair_cancellation(small(2, 7));
    CHECK(r.pass);
    CHECK(r.tree_count == 2);        // starts at j = 2
    CHECK(r.assignment_count > 14);  // random plus adversarial
}

TEST_CASE("pair cancellation by hand on the left pair tree") {
    const Tree t = Tree::from_strings({"", "1", "2", "11", "12"});
    const auto a = derive_assignment(t, std::vector<Rational>{4, 4, 8});
    const RegionConfig c(0.1);
    CHECK(mul_boundary(a, c) == Rational(-1, 9216));
    // Seedling at root (8,8) times 1_{A^c} K at node 1 (4,4).
    const Rational rest = mul_boundary(restrict_to(a, Tree::seedling()), c) * Rational(-1, 48);
    CHECK(rest == Rational(1, 9216));
    CHECK(identities::pair_cancellation(a, c).empty());
    // A vanishing indicator makes both terms zero.
    const auto z = derive_assignment(t, std::vector<Rational>{3, -1, 2});
    CHECK(mul_boundary(z, c) == 0);
    CHECK(identities::pair_cancellation(z, c).empty());
}

TEST_CASE("total cancellation through order four at two region sizes") {
    const auto r = verify_total_cancellation(small(4, 50, {0.1, 1e-10}));
    CHECK(r.pass);
    CHECK(r.cstars.size() == 2);
}

TEST_CASE("recursion and regrouping sweeps") {
    CHECK(verify_nf_recursion(small(4, 10)).pass);
    CHECK(verify_regrouping(small(4, 10)).pass);
    CHECK(verify_phase_additivity(small(3, 10)).pass);
    CHECK(verify_k_formula(small(3, 10)).pass);
}

TEST_CASE("regrouping on a tree with three final parents is zero on both sides") {
    const Tree t = Tree::from_strings({"", "1", "2", "11", "12", "21", "22", "111", "112", "121", "122"});
    REQUIRE(t.final_parents().size() == 3);
    const RegionConfig c(0.1);
    for (const auto& leaves : adversarial_leaf_values(t, c)) {
        const auto a = derive_assignment(t, leaves);
        Rational closed = 0;
        for (int ell = 2; ell <= 4; ++ell) closed += mul_typed(a, ell, c);
        CHECK(closed == 0);
        CHECK(identities::regrouped_integral(a, c) == 0);
    }
}

TEST_CASE("adversarial sets visit every indicator pattern") {
    const RegionConfig c(1e-3);
    for (const Tree& t : enumerate_trees(3)) {
        bool all_stat = false, none_stat = false, mixed = false;
        for (const auto& leaves : adversarial_leaf_values(t, c)) {
            const auto a = derive_assignment(t, leaves);
            int n = 0;
            for (const Node& p : t.parents())
                n += in_stationary(a.at(p.child(1)), a.at(p.child(2)), c) ? 1 : 0;
            all_stat |= n == t.j();
            none_stat |= n == 0;
            mixed |= n > 0 && n < t.j();
        }
        CHECK(all_stat);
        CHECK(none_stat);
        CHECK(mixed);
    }
}

TEST_CASE("a wrong identity produces a recorded counterexample") {
    const auto r = run_campaign("broken", 1, small(2, 3), [](const ExactAssignment& a, const RegionConfig&) {
        return a.root_value() > 0 ? std::string("positive root") : std::string();
    });
    CHECK(!r.pass);
    REQUIRE(r.first_counterexample);
    CHECK(r.first_counterexample->detail == "positive root");
    const auto j = certificate_json(r);
    CHECK(j["status"] == "fail");
    CHECK(j.contains("counterexample"));
}

TEST_CASE("counting claims") {
    CHECK(count_types(3).total == 5);
    CHECK(count_types(2).type_ii_iii == 2);
    CHECK(count_types(5).total == 42);
    for (int j = 2; j <= 8; ++j) CHECK(count_types(j).type_ii_iii == (std::size_t{1} << (j - 1)));
    for (int j = 2; j <= 6; ++j) CHECK(count_types(j + 2).type_iv == (std::size_t{1} << (j - 1)));
    CHECK(verify_counts(8).pass);
}

TEST_CASE("campaigns are reproducible and independent of the worker count") {
    auto o = small(3, 5, {0.1, 1e-3});
    o.seed = 42;
    o.workers = 1;
    const auto a = certificate_json(verify_nf_recursion(o));
    o.workers = 4;
    const auto b = certificate_json(verify_nf_recursion(o));
    CHECK(a.dump() == b.dump());
    CHECK(a["identity"] == "nf_recursion");
    CHECK(a["j"] == 3);
    CHECK(a["seed"] == 42);
    CHECK(a["status"] == "pass");
}

TEST_CASE("campaign order limit") {
    CHECK_THROWS_AS(verify_pair_cancellation(small(7, 1)), BoundedResourceError);
}
