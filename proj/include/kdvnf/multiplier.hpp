#pragma once
// Frequency assignments on trees, resonance phases, the factors K, region
// indicators and the multipliers m_B, m, m_1..m_4 of the normal-form expansion.
//
// Everything is templated on the scalar: kdvnf::Rational for exact checks,
// double for the solver. The kernels take (tree, value array) so that hot loops
// avoid building assignment objects; FrequencyAssignment wraps them.

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "kdvnf/scalar.hpp"
#include "kdvnf/tree.hpp"

namespace kdvnf {

struct RegionConfig {
    double cstar = 0.1;
    double low_threshold = 1.0;
    // With an empty region A the stationary indicator is identically one.
    bool empty_region = false;

    RegionConfig() = default;
    explicit RegionConfig(double c, double threshold = 1.0, bool empty = false)
        : cstar(c), low_threshold(threshold), empty_region(empty) {
        validate();
    }

    static RegionConfig empty() { return RegionConfig(0.1, 1.0, true); }

    void validate() const {
        if (!(cstar > 0.0 && cstar < 1.0)) throw ValidationError("cstar", "must lie in (0,1)");
        if (!(low_threshold > 0.0)) throw ValidationError("low_threshold", "must be positive");
    }
};

// RegionConfig with constants converted once to the working scalar.
template <class S>
struct Region {
    S cstar;
    S threshold;
    bool empty;

    explicit Region(const RegionConfig& cfg)
        : cstar(scalar_from_double<S>(cfg.cstar)), threshold(scalar_from_double<S>(cfg.low_threshold)),
          empty(cfg.empty_region) {}

    // Membership of the child pair in the stationary set A^c. Ties go to A^c.
    bool stationary(const S& x1, const S& x2) const {
        if (empty) return true;
        const S a1 = abs_value(x1), a2 = abs_value(x2);
        const S m = a1 < a2 ? a2 : a1;
        if (m < threshold) return false;
        return abs_value(S(a1 - a2)) <= cstar * m;
    }
};

template <class S>
bool in_stationary(const S& x1, const S& x2, const RegionConfig& cfg) {
    return Region<S>(cfg).stationary(x1, x2);
}

enum class TreeType { TypeI, TypeII_III, TypeIV, None };

struct TreeTypeTag {
    TreeType tag = TreeType::None;
    std::optional<Node> star;
};

inline TreeTypeTag classify_tree(const Tree& t) {
    if (t.j() == 1) return {TreeType::TypeI, Node{}};
    const auto& f = t.final_parents();
    if (f.size() == 1 && !f[0].is_root()) return {TreeType::TypeII_III, f[0]};
    if (f.size() == 2 && !f[0].is_root() && !f[1].is_root() && f[0].parent() == f[1].parent())
        return {TreeType::TypeIV, f[0].parent()};
    return {TreeType::None, std::nullopt};
}

// How evaluation treats the factors K_* = -1/(3 x1 x2).
//  strict:      any parent with a zero child raises SingularMultiplierError;
//               K*Psi products are formed literally.
//  regularized: K*Psi(*) is replaced by its value xi_*, products short-circuit
//               on a vanishing indicator, and an error is raised only if a
//               factor K that is actually needed is singular.
enum class Eval { strict, regularized };

namespace kernel {

template <class S>
bool stationary_at(const Tree& t, std::span<const S> v, int i, const Region<S>& reg) {
    return reg.stationary(v[t.child1_index(i)], v[t.child2_index(i)]);
}

template <class S>
S k_at(const Tree& t, std::span<const S> v, int i) {
    const S& a = v[t.child1_index(i)];
    const S& b = v[t.child2_index(i)];
    if (a == 0 || b == 0) throw SingularMultiplierError("K is singular: zero child frequency below node " + t.words()[i].str());
    return S(-1) / (S(3) * a * b);
}

template <class S>
S psi_at(const Tree& t, std::span<const S> v, int i) {
    return -cube(v[i]) + cube(v[t.child1_index(i)]) + cube(v[t.child2_index(i)]);
}

template <class S>
S kpsi_at(const Tree& t, std::span<const S> v, int i, Eval ev) {
    if (ev == Eval::regularized) return v[i];
    return k_at(t, v, i) * psi_at(t, v, i);
}

template <class S>
void check_regular(const Tree& t, std::span<const S> v) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        const int c1 = t.child1_index(static_cast<int>(i));
        if (c1 < 0) continue;
        if (v[c1] == 0 || v[t.child2_index(static_cast<int>(i))] == 0)
            throw SingularMultiplierError("zero child frequency below node " + t.words()[i].str());
    }
}

inline int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

template <class S>
S phase_total(const Tree& t, std::span<const S> v) {
    S acc = -cube(v[0]);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.child1_index(static_cast<int>(i)) < 0) acc += cube(v[i]);
    return acc;
}

template <class S>
S mul_boundary(const Tree& t, std::span<const S> v, const Region<S>& reg, Eval ev) {
    if (ev == Eval::strict) check_regular(t, v);
    const int n = static_cast<int>(t.size());
    for (int i = 0; i < n; ++i)
        if (t.child1_index(i) >= 0 && !stationary_at(t, v, i, reg)) return S(0);
    S prod(sign_pow(t.j() + 1));
    for (int i = 0; i < n; ++i)
        if (t.child1_index(i) >= 0) prod *= k_at(t, v, i);
    return prod;
}

template <class S>
S mul_integral(const Tree& t, std::span<const S> v, const Region<S>& reg) {
    check_regular(t, v);
    const int n = static_cast<int>(t.size());
    S kprod(sign_pow(t.j() + 1));
    int non_stationary = 0;
    int last_non_stationary = -1;
    std::vector<char> fin(n, 0);
    for (const Node& f : t.final_parents()) fin[t.index_of(f)] = 1;
    for (int i = 0; i < n; ++i) {
        if (t.child1_index(i) < 0) continue;
        kprod *= k_at(t, v, i);
        if (!stationary_at(t, v, i, reg)) {
            ++non_stationary;
            last_non_stationary = i;
        }
    }
    // First sum: a final parent in A with every other parent in A^c.
    S bracket(0);
    if (non_stationary == 1 && fin[last_non_stationary]) bracket += psi_at(t, v, last_non_stationary);
    // Second sum: all parents in A^c, phases of the non-final parents.
    if (non_stationary == 0) {
        for (int i = 0; i < n; ++i)
            if (t.child1_index(i) >= 0 && !fin[i]) bracket -= psi_at(t, v, i);
    }
    return kprod * bracket;
}

// Product over the parents except `skip` of K * 1_{A^c}; zero as soon as an
// indicator vanishes.
template <class S>
std::optional<S> stationary_k_product(const Tree& t, std::span<const S> v, const Region<S>& reg, int skip) {
    const int n = static_cast<int>(t.size());
    for (int i = 0; i < n; ++i)
        if (i != skip && t.child1_index(i) >= 0 && !stationary_at(t, v, i, reg)) return std::nullopt;
    S prod(1);
    for (int i = 0; i < n; ++i)
        if (i != skip && t.child1_index(i) >= 0) prod *= k_at(t, v, i);
    return prod;
}

template <class S>
S mul_typed(const Tree& t, const TreeTypeTag& tag, std::span<const S> v, int ell, const Region<S>& reg, Eval ev) {
    if (ell < 1 || ell > 4) throw DomainError("multiplier index must be 1..4");
    if (ev == Eval::strict) check_regular(t, v);
    const int j = t.j();
    if (ell == 1) {
        if (tag.tag != TreeType::TypeI) throw DomainError("m_1 is defined only on the tree {root,1,2}");
        if (reg.stationary(v[1], v[2])) return S(0);
        return kpsi_at(t, v, 0, ev);
    }
    if (ell == 2 || ell == 3) {
        if (tag.tag != TreeType::TypeII_III) return S(0);
        const int star = t.index_of(*tag.star);
        if (ell == 2) {
            if (stationary_at(t, v, star, reg)) return S(0);
            auto rest = stationary_k_product(t, v, reg, star);
            if (!rest) return S(0);
            return S(sign_pow(j + 1)) * kpsi_at(t, v, star, ev) * *rest;
        }
        const int p = t.parent_index(star);
        auto rest = stationary_k_product(t, v, reg, p);
        if (!rest) return S(0);
        return S(sign_pow(j)) * kpsi_at(t, v, p, ev) * *rest;
    }
    if (tag.tag != TreeType::TypeIV) return S(0);
    const int star = t.index_of(*tag.star);
    auto rest = stationary_k_product(t, v, reg, star);
    if (!rest) return S(0);
    return S(sign_pow(j + 1)) * kpsi_at(t, v, star, ev) * *rest;
}

// Fills values bottom-up from the leaf values given in leaves_lex order.
template <class S>
void fill_from_leaves(const Tree& t, std::span<const S> leaf_values, std::span<S> out) {
    const int n = static_cast<int>(t.size());
    for (int i = n - 1; i >= 0; --i) {
        const int c1 = t.child1_index(i);
        if (c1 < 0)
            out[i] = leaf_values[t.leaf_slot(i)];
        else
            out[i] = out[c1] + out[t.child2_index(i)];
    }
}

}  // namespace kernel

template <class S>
class FrequencyAssignment {
public:
    FrequencyAssignment(Tree t, std::vector<S> values) : tree_(std::move(t)), values_(std::move(values)) {}

    const Tree& tree() const noexcept { return tree_; }
    const std::vector<S>& values() const noexcept { return values_; }
    std::span<const S> span() const noexcept { return {values_.data(), values_.size()}; }

    const S& at(const Node& n) const {
        const int i = tree_.index_of(n);
        if (i < 0) throw DomainError("node " + n.str() + " is not in the tree");
        return values_[i];
    }
    const S& root_value() const noexcept { return values_[0]; }

    std::vector<S> leaf_values() const {
        std::vector<S> out;
        for (std::size_t i = 0; i < tree_.size(); ++i)
            if (tree_.child1_index(static_cast<int>(i)) < 0) out.push_back(values_[i]);
        return out;
    }

private:
    Tree tree_;
    std::vector<S> values_;
};

template <class S>
FrequencyAssignment<S> derive_assignment(const Tree& t, const std::vector<S>& leaf_values) {
    if (leaf_values.size() != t.leaves().size())
        throw DomainError("derive_assignment: expected " + std::to_string(t.leaves().size()) + " leaf values, got " +
                          std::to_string(leaf_values.size()));
    std::vector<S> v(t.size());
    kernel::fill_from_leaves<S>(t, leaf_values, v);
    return FrequencyAssignment<S>(t, std::move(v));
}

template <class S>
FrequencyAssignment<S> derive_assignment(const Tree& t, const std::map<Node, S>& leaf_values) {
    std::vector<S> ordered;
    for (const Node& leaf : t.leaves()) {
        auto it = leaf_values.find(leaf);
        if (it == leaf_values.end()) throw DomainError("derive_assignment: missing value for leaf " + leaf.str());
        ordered.push_back(it->second);
    }
    if (leaf_values.size() != ordered.size()) throw DomainError("derive_assignment: value given for a non-leaf node");
    return derive_assignment(t, ordered);
}

// The same frequencies read on a subtree (e.g. T minus some final parents).
template <class S>
FrequencyAssignment<S> restrict_to(const FrequencyAssignment<S>& a, const Tree& sub) {
    std::vector<S> v;
    v.reserve(sub.size());
    for (const Node& w : sub.words()) v.push_back(a.at(w));
    return FrequencyAssignment<S>(sub, std::move(v));
}

template <class S>
S phase_total(const FrequencyAssignment<S>& a) {
    return kernel::phase_total(a.tree(), a.span());
}

template <class S>
S phase_local(const FrequencyAssignment<S>& a, const Node& star) {
    if (!a.tree().is_parent(star)) throw DomainError("phase_local: node is not a parent");
    return kernel::psi_at(a.tree(), a.span(), a.tree().index_of(star));
}

template <class S>
S k_factor(const FrequencyAssignment<S>& a, const Node& star) {
    if (!a.tree().is_parent(star)) throw DomainError("k_factor: node is not a parent");
    return kernel::k_at(a.tree(), a.span(), a.tree().index_of(star));
}

template <class S>
S mul_boundary(const FrequencyAssignment<S>& a, const RegionConfig& cfg, Eval ev = Eval::strict) {
    return kernel::mul_boundary(a.tree(), a.span(), Region<S>(cfg), ev);
}

template <class S>
S mul_integral(const FrequencyAssignment<S>& a, const RegionConfig& cfg) {
    return kernel::mul_integral(a.tree(), a.span(), Region<S>(cfg));
}

template <class S>
S mul_typed(const FrequencyAssignment<S>& a, int ell, const RegionConfig& cfg, Eval ev = Eval::strict) {
    return kernel::mul_typed(a.tree(), classify_tree(a.tree()), a.span(), ell, Region<S>(cfg), ev);
}

}  // namespace kdvnf
