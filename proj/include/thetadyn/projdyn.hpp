#ifndef THETADYN_PROJDYN_HPP
#define THETADYN_PROJDYN_HPP

// The self-map theta_k(x) = k*(x + 1/x) on P^1(F_q) together with its
// conjugation partners, exhaustive functional-graph construction and a
// canonical structural summary (cycle spectrum, AHU tree encodings,
// indegree histogram).

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ffield.hpp"

namespace thetadyn {

struct ThetaMap {
    const FieldCtx* F;
    i64 k;  // prime-field residue in [1, p)

    ThetaMap(const FieldCtx& ctx, i64 k_in) : F(&ctx), k(mod_reduce(k_in, ctx.p)) {
        if (k == 0) throw Error(errc::k_zero, "theta map needs k nonzero mod p");
    }
};

// theta_k: 0 and infinity map to infinity, otherwise x -> k*(x + x^{-1}).
inline ProjPoint theta_apply(const ThetaMap& m, const ProjPoint& x) {
    const FieldCtx& F = *m.F;
    if (x.infinite || F.is_zero(x.v)) return ProjPoint::infinity();
    return ProjPoint::finite(F.scalar_mul(m.k, F.add(x.v, F.inv(x.v))));
}

// The involution (x+1)/(x-1), exchanging 1 and infinity.
inline ProjPoint psi_apply(const FieldCtx& F, const ProjPoint& x) {
    if (x.infinite) return ProjPoint::finite(F.one());
    if (x.v == F.one()) return ProjPoint::infinity();
    return ProjPoint::finite(F.div(F.add(x.v, F.one()), F.sub(x.v, F.one())));
}

enum class SquareSign { plus, minus };

// sign plus: x -> x^2 with inf -> inf; sign minus: x -> x^{-2} swapping 0 and inf.
inline ProjPoint square_map_apply(const FieldCtx& F, const ProjPoint& x, SquareSign sign) {
    if (sign == SquareSign::plus) {
        if (x.infinite) return ProjPoint::infinity();
        return ProjPoint::finite(F.mul(x.v, x.v));
    }
    if (x.infinite) return ProjPoint::finite(F.zero());
    if (F.is_zero(x.v)) return ProjPoint::infinity();
    auto ix = F.inv(x.v);
    return ProjPoint::finite(F.mul(ix, ix));
}

// Node indexing for P^1(F_q): finite elements by coefficient code, infinity last.
inline i64 node_index(const FieldCtx& F, const ProjPoint& x) {
    return x.infinite ? F.q : F.code(x.v);
}

inline ProjPoint node_point(const FieldCtx& F, i64 index) {
    return index == F.q ? ProjPoint::infinity() : ProjPoint::finite(F.elem_from_code(index));
}

// All x with theta_k(x) = y: roots of k x^2 - y x + k, or {0, inf} when y = inf.
// Sorted by node index.
inline std::vector<ProjPoint> preimages(const ThetaMap& m, const ProjPoint& y) {
    const FieldCtx& F = *m.F;
    if (y.infinite) return {ProjPoint::finite(F.zero()), ProjPoint::infinity()};
    // x = (y +- sqrt(y^2 - 4k^2)) / (2k)
    FieldElem twok = F.from_int(2 * m.k);
    FieldElem disc = F.sub(F.mul(y.v, y.v), F.mul(twok, twok));
    if (!F.is_square(disc)) return {};
    auto [r1, r2] = F.sqrt(disc);
    FieldElem inv2k = F.inv(twok);
    FieldElem x1 = F.mul(F.add(y.v, r1), inv2k);
    if (F.is_zero(disc)) return {ProjPoint::finite(x1)};
    FieldElem x2 = F.mul(F.add(y.v, r2), inv2k);
    if (F.code(x2) < F.code(x1)) std::swap(x1, x2);
    return {ProjPoint::finite(x1), ProjPoint::finite(x2)};
}

// Explicit successor array over P^1(F_q).
struct FunctionalGraph {
    const FieldCtx* F = nullptr;
    i64 domain_size = 0;  // q + 1
    i64 k = 0;            // the parameter when built from a ThetaMap, else 0
    std::vector<int32_t> successor;

    ProjPoint label(i64 index) const { return node_point(*F, index); }
};

inline FunctionalGraph build_graph(const FieldCtx& F,
                                   const std::function<ProjPoint(const ProjPoint&)>& map,
                                   i64 domain_limit = kDefaultDomainLimit) {
    if (F.q + 1 > domain_limit)
        throw Error(errc::domain_too_large,
                    "domain size " + std::to_string(F.q + 1) + " exceeds limit " +
                        std::to_string(domain_limit));
    FunctionalGraph g;
    g.F = &F;
    g.domain_size = F.q + 1;
    g.successor.resize(g.domain_size);
    for (i64 i = 0; i <= F.q; ++i)
        g.successor[i] = (int32_t)node_index(F, map(node_point(F, i)));
    return g;
}

inline FunctionalGraph build_graph(const ThetaMap& m, i64 domain_limit = kDefaultDomainLimit) {
    auto g = build_graph(*m.F, [&](const ProjPoint& x) { return theta_apply(m, x); }, domain_limit);
    g.k = m.k;
    return g;
}

struct CycleData {
    std::vector<int32_t> nodes;             // in successor order, rotated to start at min node
    std::vector<std::string> tree_encodings;  // per cyclic node, same order as nodes

    i64 length() const { return (i64)nodes.size(); }
};

struct GraphSummary {
    i64 domain_size = 0;
    std::vector<CycleData> cycles;  // sorted by (length, first node)
    std::vector<std::pair<i64, i64>> cycle_spectrum;  // (length, count), ascending lengths
    std::map<int, i64> indegree_histogram;

    i64 component_count() const { return (i64)cycles.size(); }
};

// Canonical rooted-tree encoding: "(" + sorted child encodings + ")".
// Children of a node are its preimages; for a cyclic root only the
// non-cyclic preimages belong to its tree.
namespace detail {

inline std::string ahu_encode(i64 root, const std::vector<std::vector<int32_t>>& children) {
    // iterative post-order; trees can be deep for generic maps
    struct Frame {
        i64 node;
        size_t next_child = 0;
        std::vector<std::string> parts;
    };
    std::vector<Frame> stack;
    stack.push_back({root, 0, {}});
    std::string result;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& kids = children[f.node];
        if (f.next_child < kids.size()) {
            i64 child = kids[f.next_child++];
            stack.push_back({child, 0, {}});
            continue;
        }
        std::sort(f.parts.begin(), f.parts.end());
        std::string enc = "(";
        for (auto& s : f.parts) enc += s;
        enc += ")";
        stack.pop_back();
        if (stack.empty())
            result = std::move(enc);
        else
            stack.back().parts.push_back(std::move(enc));
    }
    return result;
}

}  // namespace detail

inline GraphSummary summarize(const FunctionalGraph& g) {
    const i64 N = g.domain_size;
    GraphSummary s;
    s.domain_size = N;

    // indegrees
    std::vector<int32_t> indeg(N, 0);
    for (i64 i = 0; i < N; ++i) ++indeg[g.successor[i]];
    for (i64 i = 0; i < N; ++i) ++s.indegree_histogram[indeg[i]];

    // cycle detection by iterative successor walk with three-color marking
    std::vector<int8_t> color(N, 0);  // 0 unvisited, 1 on current path, 2 finished
    std::vector<int8_t> cyclic(N, 0);
    std::vector<int32_t> path;
    for (i64 start = 0; start < N; ++start) {
        if (color[start]) continue;
        path.clear();
        i64 v = start;
        while (color[v] == 0) {
            color[v] = 1;
            path.push_back((int32_t)v);
            v = g.successor[v];
        }
        if (color[v] == 1) {
            // new cycle: the suffix of the path from v onward
            size_t cut = path.size();
            while (cut > 0 && path[cut - 1] != v) --cut;
            CycleData cyc;
            cyc.nodes.assign(path.begin() + (cut - 1), path.end());
            for (auto node : cyc.nodes) cyclic[node] = 1;
            s.cycles.push_back(std::move(cyc));
        }
        for (auto node : path) color[node] = 2;
    }

    // reversed adjacency restricted to tree edges (non-cyclic child -> parent)
    std::vector<std::vector<int32_t>> children(N);
    for (i64 i = 0; i < N; ++i)
        if (!cyclic[i]) children[g.successor[i]].push_back((int32_t)i);

    for (auto& cyc : s.cycles) {
        // rotate so the smallest node comes first
        auto mn = std::min_element(cyc.nodes.begin(), cyc.nodes.end());
        std::rotate(cyc.nodes.begin(), mn, cyc.nodes.end());
        cyc.tree_encodings.reserve(cyc.nodes.size());
        for (auto node : cyc.nodes) cyc.tree_encodings.push_back(detail::ahu_encode(node, children));
    }
    std::sort(s.cycles.begin(), s.cycles.end(), [](const CycleData& a, const CycleData& b) {
        if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
        return a.nodes[0] < b.nodes[0];
    });

    std::map<i64, i64> spec;
    for (const auto& cyc : s.cycles) ++spec[cyc.length()];
    s.cycle_spectrum.assign(spec.begin(), spec.end());
    return s;
}

// Number of nodes in a canonically encoded tree (the root included).
inline i64 tree_encoding_size(const std::string& enc) {
    return (i64)std::count(enc.begin(), enc.end(), '(');
}

}  // namespace thetadyn

#endif
