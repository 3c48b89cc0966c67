#ifndef THETADYN_REPORT_HPP
#define THETADYN_REPORT_HPP

// Predicted-structure reports shared by the closed-form predictors, plus the
// tree-shape vocabulary used to compare predictions against brute force.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "modmath.hpp"

namespace thetadyn {

struct TreeShape {
    std::vector<TreeShape> children;
};

inline std::string encode_tree(const TreeShape& t) {
    std::vector<std::string> parts;
    parts.reserve(t.children.size());
    for (const auto& ch : t.children) parts.push_back(encode_tree(ch));
    std::sort(parts.begin(), parts.end());
    std::string enc = "(";
    for (auto& s : parts) enc += s;
    enc += ")";
    return enc;
}

// Complete binary tree: every vertex down to the given depth has two children.
inline TreeShape full_binary(int depth) {
    TreeShape t;
    if (depth > 0) t.children = {full_binary(depth - 1), full_binary(depth - 1)};
    return t;
}

// The standard reversed tree hanging off a cyclic vertex: the root has one
// child, everything below branches fully; 2^{k-1} vertices at level k <= depth.
inline TreeShape generic_root_tree(int depth) {
    TreeShape t;
    if (depth >= 1) t.children = {full_binary(depth - 1)};
    return t;
}

// Root and its level-1 vertex have one child each, full branching below
// (the boundary fixed points of the degree-7 CM case).
inline TreeShape pinched_level1_tree(int depth) {
    TreeShape t;
    if (depth >= 1) {
        TreeShape lvl1;
        if (depth >= 2) lvl1.children = {full_binary(depth - 2)};
        t.children = {std::move(lvl1)};
    }
    return t;
}

// The tree rooted at infinity in the Gaussian CM case: root one child, the
// level-1 vertex two children, both level-2 vertices one child each, full
// branching below; depth >= 3.
inline TreeShape pinched_level2_tree(int depth) {
    if (depth < 3) throw Error(errc::internal, "pinched_level2_tree requires depth >= 3");
    TreeShape lvl2a, lvl2b;
    lvl2a.children = {full_binary(depth - 3)};
    lvl2b.children = {full_binary(depth - 3)};
    TreeShape lvl1;
    lvl1.children = {std::move(lvl2a), std::move(lvl2b)};
    TreeShape root;
    root.children = {std::move(lvl1)};
    return root;
}

// A leaf: a cyclic vertex carrying no tree.
inline std::string bare_root_encoding() { return "()"; }

// One class of predicted cycles. Every cyclic vertex of every cycle in the
// class roots a tree with the same canonical encoding.
struct CycleClassPrediction {
    i64 length = 0;
    i64 count = 0;            // cycles of this length contributed by the class
    std::string root_tree;    // canonical encoding per cyclic vertex
    std::string note;         // provenance: which rule produced the entry
};

struct TreePlanEntry {
    std::string root_class;  // e.g. "generic A-side root", "infinity"
    int depth = 0;
    std::string shape;  // canonical encoding
};

struct StructureReport {
    std::string case_name;
    std::vector<CycleClassPrediction> classes;
    std::vector<TreePlanEntry> tree_plan;
    std::vector<std::string> notes;

    // Aggregated multiset {(length, count)}, ascending lengths.
    std::vector<std::pair<i64, i64>> spectrum() const {
        std::map<i64, i64> agg;
        for (const auto& c : classes) agg[c.length] += c.count;
        return {agg.begin(), agg.end()};
    }

    i64 component_count() const {
        i64 total = 0;
        for (const auto& c : classes) total += c.count;
        return total;
    }
};

}  // namespace thetadyn

#endif
