#pragma once
// Binary trees indexing the terms of the normal-form expansion.
//
// A node is a word over {1,2}; the empty word is the root. A tree is a finite
// set of words that is prefix-closed and sibling-complete. Trees are immutable
// values: concat/subtract build new trees.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kdvnf/errors.hpp"

namespace kdvnf {

class Node {
public:
    static constexpr int max_length = 31;

    Node() = default;

    explicit Node(std::string_view word) {
        if (word.size() > static_cast<std::size_t>(max_length))
            throw DomainError("node word too long: " + std::string(word));
        for (char c : word) {
            if (c != '1' && c != '2') throw DomainError("node word must use letters 1 and 2: " + std::string(word));
            push(c == '2');
        }
    }

    static Node root() { return Node{}; }

    int length() const noexcept { return len_; }
    bool is_root() const noexcept { return len_ == 0; }

    // Letter at position i, as 1 or 2.
    int letter(int i) const noexcept { return ((bits_ >> i) & 1u) ? 2 : 1; }

    Node child(int letter) const {
        if (letter != 1 && letter != 2) throw DomainError("child letter must be 1 or 2");
        if (len_ >= max_length) throw BoundedResourceError("node depth limit reached");
        Node n = *this;
        n.push(letter == 2);
        return n;
    }

    Node parent() const {
        if (is_root()) throw DomainError("the root has no parent");
        Node n = *this;
        --n.len_;
        n.bits_ &= ~(1u << n.len_);
        return n;
    }

    Node sibling() const {
        if (is_root()) throw DomainError("the root has no sibling");
        Node n = *this;
        n.bits_ ^= (1u << (len_ - 1));
        return n;
    }

    // Word with `letter` prepended, used when grafting subtrees under a root.
    Node prefixed(int letter) const {
        if (len_ >= max_length) throw BoundedResourceError("node depth limit reached");
        Node n;
        n.len_ = len_ + 1;
        n.bits_ = (bits_ << 1) | (letter == 2 ? 1u : 0u);
        return n;
    }

    std::string str() const {
        std::string s;
        s.reserve(len_);
        for (int i = 0; i < len_; ++i) s.push_back(letter(i) == 2 ? '2' : '1');
        return s;
    }

    // Lexicographic with 1 < 2 and a proper prefix before its extensions.
    friend std::strong_ordering operator<=>(const Node& a, const Node& b) noexcept {
        const int m = std::min(a.len_, b.len_);
        for (int i = 0; i < m; ++i) {
            const int la = a.letter(i), lb = b.letter(i);
            if (la != lb) return la <=> lb;
        }
        return a.len_ <=> b.len_;
    }
    friend bool operator==(const Node& a, const Node& b) noexcept {
        return a.len_ == b.len_ && a.bits_ == b.bits_;
    }

private:
    void push(bool two) {
        if (two) bits_ |= (1u << len_);
        ++len_;
    }

    std::uint32_t bits_ = 0;
    std::uint8_t len_ = 0;
};

inline Node parent(const Node& n) { return n.parent(); }
inline Node sibling(const Node& n) { return n.sibling(); }

class Tree {
public:
    // Validates the word set; throws DomainError on any violation.
    explicit Tree(std::vector<Node> words) : words_(std::move(words)) {
        std::sort(words_.begin(), words_.end());
        words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
        if (words_.empty() || !words_.front().is_root()) throw DomainError("tree must contain the root");
        for (const Node& w : words_) {
            if (w.is_root()) continue;
            if (!contains(w.parent())) throw DomainError("tree is not prefix-closed at " + w.str());
            if (!contains(w.sibling())) throw DomainError("tree is not sibling-complete at " + w.str());
        }
        build_cache();
    }

    static Tree from_strings(const std::vector<std::string>& words) {
        std::vector<Node> nodes;
        nodes.reserve(words.size());
        for (const auto& w : words) nodes.emplace_back(w);
        return Tree(std::move(nodes));
    }

    // The tree with a single parent: {root, 1, 2}.
    static Tree seedling() { return Tree({Node{}, Node("1"), Node("2")}); }

    const std::vector<Node>& words() const noexcept { return words_; }
    std::size_t size() const noexcept { return words_.size(); }

    // Number of parent nodes j; the tree belongs to T_j.
    int j() const noexcept { return static_cast<int>(parents_.size()); }

    const std::vector<Node>& parents() const noexcept { return parents_; }
    const std::vector<Node>& leaves() const noexcept { return leaves_; }
    const std::vector<Node>& final_parents() const noexcept { return final_parents_; }

    int index_of(const Node& n) const noexcept {
        auto it = std::lower_bound(words_.begin(), words_.end(), n);
        if (it == words_.end() || !(*it == n)) return -1;
        return static_cast<int>(it - words_.begin());
    }
    bool contains(const Node& n) const noexcept { return index_of(n) >= 0; }

    bool is_leaf(const Node& n) const noexcept {
        const int i = index_of(n);
        return i >= 0 && child1_[i] < 0;
    }
    bool is_parent(const Node& n) const noexcept {
        const int i = index_of(n);
        return i >= 0 && child1_[i] >= 0;
    }
    bool is_final_parent(const Node& n) const noexcept {
        return std::binary_search(final_parents_.begin(), final_parents_.end(), n);
    }

    // Index-level topology, aligned with words(); -1 marks an absent relative.
    int child1_index(int i) const noexcept { return child1_[i]; }
    int child2_index(int i) const noexcept { return child2_[i]; }
    int parent_index(int i) const noexcept { return parent_[i]; }
    // Position of each leaf in leaves_lex order, or -1 for parents.
    int leaf_slot(int i) const noexcept { return leaf_slot_[i]; }

    std::string to_json() const {
        std::string s = "[";
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (i) s += ",";
            s += "\"" + words_[i].str() + "\"";
        }
        return s + "]";
    }

    friend bool operator==(const Tree& a, const Tree& b) noexcept { return a.words_ == b.words_; }
    friend bool operator<(const Tree& a, const Tree& b) noexcept {
        return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
    }

private:
    void build_cache() {
        const int n = static_cast<int>(words_.size());
        child1_.assign(n, -1);
        child2_.assign(n, -1);
        parent_.assign(n, -1);
        leaf_slot_.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            const Node& w = words_[i];
            if (w.length() < Node::max_length) {
                child1_[i] = index_of(w.child(1));
                child2_[i] = index_of(w.child(2));
            }
            if (!w.is_root()) parent_[i] = index_of(w.parent());
        }
        for (int i = 0; i < n; ++i) {
            if (child1_[i] >= 0) {
                parents_.push_back(words_[i]);
                if (child1_[child1_[i]] < 0 && child1_[child2_[i]] < 0) final_parents_.push_back(words_[i]);
            } else {
                leaf_slot_[i] = static_cast<int>(leaves_.size());
                leaves_.push_back(words_[i]);
            }
        }
    }

    std::vector<Node> words_;
    std::vector<Node> parents_, leaves_, final_parents_;
    std::vector<int> child1_, child2_, parent_, leaf_slot_;
};

// Leaves in lexicographic order (the planar left-to-right order).
inline std::vector<Node> leaves_lex(const Tree& t) { return t.leaves(); }

inline Tree concat(const Tree& t, const Node& leaf) {
    if (!t.is_leaf(leaf)) throw DomainError("concat: node " + (leaf.is_root() ? std::string("<root>") : leaf.str()) + " is not a leaf");
    std::vector<Node> w = t.words();
    w.push_back(leaf.child(1));
    w.push_back(leaf.child(2));
    return Tree(std::move(w));
}

inline Tree subtract(const Tree& t, const std::vector<Node>& c) {
    for (const Node& n : c)
        if (!t.is_final_parent(n)) throw DomainError("subtract: node " + (n.is_root() ? std::string("<root>") : n.str()) + " is not a final parent");
    std::vector<Node> w;
    w.reserve(t.size());
    for (const Node& x : t.words()) {
        if (!x.is_root() && std::find(c.begin(), c.end(), x.parent()) != c.end()) continue;
        w.push_back(x);
    }
    return Tree(std::move(w));
}

inline constexpr int default_max_tree_order = 8;

namespace detail {

inline void shapes(int j, std::vector<std::vector<Node>>& out) {
    if (j == 0) {
        out.push_back({Node{}});
        return;
    }
    for (int left = 0; left < j; ++left) {
        std::vector<std::vector<Node>> ls, rs;
        shapes(left, ls);
        shapes(j - 1 - left, rs);
        for (const auto& l : ls)
            for (const auto& r : rs) {
                std::vector<Node> w{Node{}};
                w.reserve(l.size() + r.size() + 1);
                for (const Node& x : l) w.push_back(x.prefixed(1));
                for (const Node& x : r) w.push_back(x.prefixed(2));
                out.push_back(std::move(w));
            }
    }
}

}  // namespace detail

// All trees with j parents, sorted by their sorted word lists.
inline std::vector<Tree> enumerate_trees(int j, int max_j = default_max_tree_order) {
    if (j < 1 || j > max_j)
        throw BoundedResourceError("enumerate_trees: j=" + std::to_string(j) + " outside [1," + std::to_string(max_j) + "]");
    std::vector<std::vector<Node>> raw;
    detail::shapes(j, raw);
    std::vector<Tree> trees;
    trees.reserve(raw.size());
    for (auto& w : raw) trees.emplace_back(std::move(w));
    std::sort(trees.begin(), trees.end());
    return trees;
}

inline std::uint64_t catalan(int j) {
    std::uint64_t c = 1;
    for (int k = 0; k < j; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

}  // namespace kdvnf
