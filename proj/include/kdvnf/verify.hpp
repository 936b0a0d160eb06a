#pragma once
// Exact-arithmetic verification campaigns for the cancellation identities of
// the tree expansion and for the tree counting claims.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kdvnf/multiplier.hpp"
#include "kdvnf/parallel.hpp"
#include "kdvnf/rng.hpp"

namespace kdvnf {

using ExactAssignment = FrequencyAssignment<Rational>;

struct Counterexample {
    Tree tree;
    std::vector<Rational> leaf_values;
    double cstar = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::string identity_name;
    int j_max = 0;
    int trials = 0;
    std::vector<double> cstars;
    std::uint64_t seed = 0;
    int tree_count = 0;
    long assignment_count = 0;
    bool pass = true;
    std::optional<Counterexample> first_counterexample;
};

struct CampaignOptions {
    int j_max = 5;
    int trials = 20;
    std::vector<RegionConfig> regions{RegionConfig(0.1)};
    std::uint64_t seed = 0;
    bool adversarial = true;
    int workers = worker_count();
};

inline constexpr int max_verification_order = 6;

// ---------------------------------------------------------------------------
// Assignment sampling

// Random leaves n/d with n in [-256,256]\{0} and d in [1,16]; redrawn until no
// node carries the value zero.
inline std::vector<Rational> random_leaf_values(const Tree& t, Rng& rng) {
    const std::size_t nl = t.leaves().size();
    std::vector<Rational> leaves(nl), all(t.size());
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (auto& x : leaves) {
            std::int64_t n = 0;
            while (n == 0) n = rng.uniform_int(-256, 256);
            x = Rational(n, rng.uniform_int(1, 16));
        }
        kernel::fill_from_leaves<Rational>(t, leaves, all);
        bool ok = true;
        for (const auto& v : all) ok = ok && v != 0;
        if (ok) return leaves;
    }
    throw ConvergenceError("could not draw a nonzero assignment");
}

enum class Split { equal, tie, unequal, opposite };

// Splits a node value x into two children according to the pattern; all but
// `unequal` land in A^c (when the children are large enough), `tie` exactly
// on the comparability boundary.
inline std::pair<Rational, Rational> split_value(const Rational& x, Split how, const Rational& c) {
    switch (how) {
        case Split::equal: return {x / 2, x / 2};
        case Split::tie: return {x / (2 - c), x * (1 - c) / (2 - c)};
        case Split::unequal: return {3 * x, -2 * x};
        case Split::opposite: {
            // (K x, -(K-1) x) with 1/K <= c, a high-high to low interaction.
            const BigInt k = BigInt(boost::multiprecision::denominator(c) / boost::multiprecision::numerator(c)) + 2;
            return {Rational(k) * x, -Rational(k - 1) * x};
        }
    }
    return {x, x};
}

// Deterministic assignments forcing the indicator patterns all-A^c, all-A
// and several mixtures.
inline std::vector<std::vector<Rational>> adversarial_leaf_values(const Tree& t, const RegionConfig& cfg) {
    const Rational c = exact_rational(cfg.cstar);
    const int n = static_cast<int>(t.size());
    std::vector<char> fin(n, 0);
    for (const Node& f : t.final_parents()) fin[t.index_of(f)] = 1;

    using Rule = std::function<Split(int)>;
    struct Pattern {
        Rational root;
        Rule rule;
    };
    const Rational big(3 * 256 * 64);
    std::vector<Pattern> patterns = {
        {big, [](int) { return Split::equal; }},
        {big, [](int) { return Split::tie; }},
        {big, [](int) { return Split::opposite; }},
        {Rational(1), [](int) { return Split::unequal; }},
        {Rational(1, 1 << 12), [](int) { return Split::equal; }},  // everything below the threshold
        {big, [&](int i) { return fin[i] ? Split::unequal : Split::equal; }},
        {big, [&](int i) { return fin[i] ? Split::equal : Split::unequal; }},
        {big, [&](int i) { return t.words()[i].length() % 2 == 0 ? Split::equal : Split::unequal; }},
        {big, [&](int i) { return t.words()[i].length() % 2 == 0 ? Split::unequal : Split::opposite; }},
        {big, [&](int i) { return i == 0 ? Split::opposite : Split::tie; }},
    };
    std::vector<std::vector<Rational>> out;
    for (const auto& p : patterns) {
        std::vector<Rational> v(n);
        v[0] = p.root;
        for (int i = 0; i < n; ++i) {
            const int c1 = t.child1_index(i);
            if (c1 < 0) continue;
            auto [a, b] = split_value(v[i], p.rule(i), c);
            v[c1] = a;
            v[t.child2_index(i)] = b;
        }
        std::vector<Rational> leaves;
        for (int i = 0; i < n; ++i)
            if (t.child1_index(i) < 0) leaves.push_back(v[i]);
        out.push_back(std::move(leaves));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pointwise identities. Each returns an empty string on success or a short
// description of the violated equality.

namespace identities {

inline std::vector<std::vector<Node>> subsets(const std::vector<Node>& f) {
    std::vector<std::vector<Node>> out;
    const std::size_t n = f.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Node> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) s.push_back(f[i]);
        out.push_back(std::move(s));
    }
    return out;
}

// 1_{A^c_*} K_* as a standalone factor (the boundary multiplier of the seedling at *).
inline Rational seedling_boundary(const ExactAssignment& a, const Node& star, const Region<Rational>& reg) {
    const Tree& t = a.tree();
    const int i = t.index_of(star);
    if (!kernel::stationary_at(t, a.span(), i, reg)) return Rational(0);
    return kernel::k_at(t, a.span(), i);
}

inline std::string phase_additivity(const ExactAssignment& a, const RegionConfig&) {
    Rational sum(0);
    for (const Node& p : a.tree().parents()) sum += phase_local(a, p);
    return sum == phase_total(a) ? "" : "sum of local phases differs from the total phase";
}

inline std::string k_formula(const ExactAssignment& a, const RegionConfig&) {
    for (const Node& p : a.tree().parents()) {
        const Rational psi = phase_local(a, p);
        if (psi == 0) continue;
        if (k_factor(a, p) * psi != a.at(p)) return "K*Psi != xi at node " + p.str();
        if (k_factor(a, p) != a.at(p) / psi) return "K != xi/Psi at node " + p.str();
    }
    return "";
}

inline std::string pair_cancellation(const ExactAssignment& a, const RegionConfig& cfg) {
    const Region<Rational> reg(cfg);
    const Rational mb = mul_boundary(a, cfg);
    for (const Node& star : a.tree().final_parents()) {
        const Tree sub = subtract(a.tree(), {star});
        const Rational rhs = mul_boundary(restrict_to(a, sub), cfg) * seedling_boundary(a, star, reg);
        if (mb + rhs != 0) return "pair sum " + to_string(Rational(mb + rhs)) + " at final parent " + star.str();
    }
    return "";
}

inline std::string total_cancellation(const ExactAssignment& a, const RegionConfig& cfg) {
    const Region<Rational> reg(cfg);
    Rational total(0);
    for (const auto& p : subsets(a.tree().final_parents())) {
        Rational term = mul_boundary(restrict_to(a, subtract(a.tree(), p)), cfg);
        for (const Node& star : p) term *= seedling_boundary(a, star, reg);
        total += term;
    }
    return total == 0 ? "" : "boundary total " + to_string(total);
}

inline std::string nf_recursion(const ExactAssignment& a, const RegionConfig& cfg) {
    Rational lhs(0);
    for (const Node& star : a.tree().final_parents()) {
        const Tree sub = subtract(a.tree(), {star});
        lhs -= mul_boundary(restrict_to(a, sub), cfg) * k_factor(a, star) * phase_local(a, star);
    }
    const Rational rhs = mul_integral(a, cfg) + phase_total(a) * mul_boundary(a, cfg);
    return lhs == rhs ? "" : "recursion lhs " + to_string(lhs) + " rhs " + to_string(rhs);
}

// Brute-force subset regrouping of the integral multipliers.
inline Rational regrouped_integral(const ExactAssignment& a, const RegionConfig& cfg) {
    const Region<Rational> reg(cfg);
    Rational total(0);
    for (const auto& c : subsets(a.tree().final_parents())) {
        Rational term = mul_integral(restrict_to(a, subtract(a.tree(), c)), cfg);
        for (const Node& star : c) term *= seedling_boundary(a, star, reg);
        total += term;
    }
    return total;
}

inline std::string regrouping(const ExactAssignment& a, const RegionConfig& cfg) {
    const Rational brute = regrouped_integral(a, cfg);
    Rational closed(0);
    for (int ell = 2; ell <= 4; ++ell) closed += mul_typed(a, ell, cfg);
    return brute == closed ? "" : "regrouped " + to_string(brute) + " closed form " + to_string(closed);
}

}  // namespace identities

using PointwiseIdentity = std::function<std::string(const ExactAssignment&, const RegionConfig&)>;

// Runs one identity over all trees with j_min <= j <= j_max, every region in
// opts.regions, `trials` random assignments plus the adversarial set.
inline VerificationReport run_campaign(const std::string& name, int j_min, const CampaignOptions& opts,
                                       const PointwiseIdentity& check) {
    if (opts.j_max > max_verification_order)
        throw BoundedResourceError("verification is limited to j <= " + std::to_string(max_verification_order));
    VerificationReport rep;
    rep.identity_name = name;
    rep.j_max = opts.j_max;
    rep.trials = opts.trials;
    rep.seed = opts.seed;
    for (const auto& r : opts.regions) rep.cstars.push_back(r.cstar);

    std::vector<Tree> trees;
    std::vector<int> tree_ids;
    for (int j = j_min; j <= opts.j_max; ++j) {
        auto tj = enumerate_trees(j);
        for (std::size_t k = 0; k < tj.size(); ++k) {
            trees.push_back(tj[k]);
            tree_ids.push_back(j * 10000 + static_cast<int>(k));
        }
    }
    rep.tree_count = static_cast<int>(trees.size());

    struct UnitResult {
        long count = 0;
        std::optional<Counterexample> failure;
    };
    const std::size_t nr = opts.regions.size();
    std::vector<UnitResult> results(trees.size() * nr);
    const std::uint64_t campaign = name_hash(name);

    parallel_for(
        results.size(),
        [&](std::size_t u) {
            const Tree& t = trees[u / nr];
            const RegionConfig& cfg = opts.regions[u % nr];
            UnitResult& res = results[u];
            auto test = [&](const std::vector<Rational>& leaves) {
                if (res.failure) return;
                ++res.count;
                const auto a = derive_assignment(t, leaves);
                std::string why = check(a, cfg);
                if (!why.empty()) res.failure = Counterexample{t, leaves, cfg.cstar, why};
            };
            if (opts.adversarial)
                for (const auto& leaves : adversarial_leaf_values(t, cfg)) test(leaves);
            for (int trial = 0; trial < opts.trials; ++trial) {
                Rng rng(split_seed(opts.seed, {campaign, static_cast<std::uint64_t>(tree_ids[u / nr]),
                                               static_cast<std::uint64_t>(u % nr), static_cast<std::uint64_t>(trial)}));
                test(random_leaf_values(t, rng));
            }
        },
        opts.workers);

    for (auto& r : results) {
        rep.assignment_count += r.count;
        if (r.failure && !rep.first_counterexample) rep.first_counterexample = std::move(r.failure);
    }
    rep.pass = !rep.first_counterexample.has_value();
    return rep;
}

inline VerificationReport verify_phase_additivity(const CampaignOptions& o) {
    return run_campaign("phase_additivity", 1, o, identities::phase_additivity);
}
inline VerificationReport verify_k_formula(const CampaignOptions& o) {
    return run_campaign("k_formula", 1, o, identities::k_formula);
}
inline VerificationReport verify_pair_cancellation(const CampaignOptions& o) {
    return run_campaign("pair_cancellation", 2, o, identities::pair_cancellation);
}
inline VerificationReport verify_total_cancellation(const CampaignOptions& o) {
    return run_campaign("total_cancellation", 1, o, identities::total_cancellation);
}
inline VerificationReport verify_nf_recursion(const CampaignOptions& o) {
    return run_campaign("nf_recursion", 1, o, identities::nf_recursion);
}
inline VerificationReport verify_regrouping(const CampaignOptions& o) {
    return run_campaign("regrouping", 2, o, identities::regrouping);
}

struct TypeCounts {
    std::size_t total = 0;
    std::size_t type_ii_iii = 0;
    std::size_t type_iv = 0;
};

inline TypeCounts count_types(int j) {
    TypeCounts c;
    for (const Tree& t : enumerate_trees(j)) {
        ++c.total;
        const auto tag = classify_tree(t).tag;
        if (tag == TreeType::TypeII_III) ++c.type_ii_iii;
        if (tag == TreeType::TypeIV) ++c.type_iv;
    }
    return c;
}

// Catalan totals for 1..j_max, 2^{j-1} type II/III trees in T_j (j >= 2) and
// 2^{j-1} type IV trees in T_{j+2} (j+2 <= j_max).
inline VerificationReport verify_counts(int j_max, std::uint64_t seed = 0) {
    if (j_max < 1 || j_max > default_max_tree_order) throw BoundedResourceError("verify_counts: j_max out of range");
    VerificationReport rep;
    rep.identity_name = "counts";
    rep.j_max = j_max;
    rep.seed = seed;
    std::vector<TypeCounts> counts(j_max + 1);
    for (int j = 1; j <= j_max; ++j) counts[j] = count_types(j);
    auto fail = [&](const std::string& why) {
        if (!rep.first_counterexample) rep.first_counterexample = Counterexample{Tree::seedling(), {}, 0.0, why};
    };
    for (int j = 1; j <= j_max; ++j) {
        ++rep.tree_count;
        if (counts[j].total != catalan(j)) fail("|T_" + std::to_string(j) + "| = " + std::to_string(counts[j].total));
        const std::size_t pow = std::size_t{1} << (j - 1);
        if (j >= 2 && counts[j].type_ii_iii != pow) fail("type II/III count wrong at j=" + std::to_string(j));
        if (j + 2 <= j_max && j >= 1 && counts[j + 2].type_iv != pow)
            fail("type IV count wrong at j+2=" + std::to_string(j + 2));
    }
    rep.pass = !rep.first_counterexample.has_value();
    return rep;
}

}  // namespace kdvnf
