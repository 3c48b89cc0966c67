#ifndef THETADYN_HARNESS_HPP
#define THETADYN_HARNESS_HPP

// Case classification, prediction-versus-brute-force verification, graph
// export/import and parameter sweeps.

#include <chrono>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "case1.hpp"
#include "case23.hpp"

namespace thetadyn {

enum class CaseTag { case1_plus, case1_minus, case2, case3, generic };

inline const char* case_tag_name(CaseTag t) {
    switch (t) {
        case CaseTag::case1_plus: return "case1+";
        case CaseTag::case1_minus: return "case1-";
        case CaseTag::case2: return "case2";
        case CaseTag::case3: return "case3";
        default: return "generic";
    }
}

struct Classification {
    CaseTag tag = CaseTag::generic;
    int sigma_idx = -1;  // parameter index for the CM cases
};

// The three symmetric families are mutually exclusive for odd p.
inline Classification classify_k(i64 p, i64 k) {
    if (!is_prime(p) || p == 2) throw Error(errc::not_prime, "p must be an odd prime");
    k = mod_reduce(k, p);
    if (k == 0) throw Error(errc::k_zero, "k must be nonzero mod p");
    if (mod_reduce(2 * k - 1, p) == 0) return {CaseTag::case1_plus, -1};
    if (mod_reduce(2 * k + 1, p) == 0) return {CaseTag::case1_minus, -1};
    if (p % 4 == 1 && mod_reduce(4 * k * k + 1, p) == 0) {
        auto cp = case_params(CurveCase::case2, p);
        return {CaseTag::case2, cp.k[0] == k ? 0 : 1};
    }
    i64 r7 = p % 7;
    if ((r7 == 1 || r7 == 2 || r7 == 4) && mod_reduce(2 * k * k + k + 1, p) == 0) {
        auto cp = case_params(CurveCase::case3, p);
        return {CaseTag::case3, cp.k[0] == k ? 0 : 1};
    }
    return {CaseTag::generic, -1};
}

inline StructureReport predict_structure(const FieldCtx& F, i64 k,
                                         const Classification& cls,
                                         i64 domain_limit = kDefaultDomainLimit) {
    switch (cls.tag) {
        case CaseTag::case1_plus:
            return predict_case1(Case1Input::make(F.p, F.n, Case1Sign::plus, domain_limit));
        case CaseTag::case1_minus:
            return predict_case1(Case1Input::make(F.p, F.n, Case1Sign::minus, domain_limit));
        case CaseTag::case2:
        case CaseTag::case3: {
            auto tag = cls.tag == CaseTag::case2 ? CurveCase::case2 : CurveCase::case3;
            auto C = build_curve(tag, std::make_shared<FieldCtx>(F), false, domain_limit);
            return predict_case23(C, k);
        }
        default:
            throw Error(errc::k_not_in_case, "no closed-form prediction for generic k");
    }
}

struct VerificationReport {
    i64 p = 0, n = 0, k = 0;
    std::vector<i64> modulus;
    CaseTag tag = CaseTag::generic;
    bool has_prediction = false;
    std::optional<StructureReport> predicted;
    GraphSummary observed;
    bool spectrum_match = false;
    bool tree_match = false;
    std::vector<std::string> mismatches;
    double ms_predict = 0, ms_build = 0, ms_summarize = 0;

    bool ok() const { return !has_prediction || (spectrum_match && tree_match); }
};

namespace detail {

using TreeMultiset = std::map<i64, std::multiset<std::vector<std::string>>>;

inline TreeMultiset observed_tree_multiset(const GraphSummary& s) {
    TreeMultiset out;
    for (const auto& cyc : s.cycles) {
        auto trees = cyc.tree_encodings;
        std::sort(trees.begin(), trees.end());
        out[cyc.length()].insert(std::move(trees));
    }
    return out;
}

inline TreeMultiset predicted_tree_multiset(const StructureReport& r) {
    TreeMultiset out;
    for (const auto& cls : r.classes)
        for (i64 c = 0; c < cls.count; ++c)
            out[cls.length].insert(std::vector<std::string>((size_t)cls.length, cls.root_tree));
    return out;
}

inline std::string spectrum_str(const std::vector<std::pair<i64, i64>>& spec) {
    std::string s = "{";
    for (size_t i = 0; i < spec.size(); ++i)
        s += (i ? ", " : "") + ("(" + std::to_string(spec[i].first) + "," +
                                std::to_string(spec[i].second) + ")");
    return s + "}";
}

}  // namespace detail

inline VerificationReport verify_on(std::shared_ptr<const FieldCtx> F, i64 k,
                                    i64 domain_limit = kDefaultDomainLimit) {
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    VerificationReport rep;
    rep.p = F->p;
    rep.n = F->n;
    rep.k = mod_reduce(k, F->p);
    rep.modulus = F->modulus;
    auto cls = classify_k(F->p, rep.k);
    rep.tag = cls.tag;

    auto t0 = clock::now();
    if (cls.tag != CaseTag::generic) {
        rep.predicted = predict_structure(*F, rep.k, cls, domain_limit);
        rep.has_prediction = true;
    }
    auto t1 = clock::now();
    ThetaMap m(*F, rep.k);
    auto g = build_graph(m, domain_limit);
    auto t2 = clock::now();
    rep.observed = summarize(g);
    auto t3 = clock::now();
    rep.ms_predict = ms(t0, t1);
    rep.ms_build = ms(t1, t2);
    rep.ms_summarize = ms(t2, t3);

    if (rep.has_prediction) {
        auto pred_spec = rep.predicted->spectrum();
        rep.spectrum_match = pred_spec == rep.observed.cycle_spectrum;
        if (!rep.spectrum_match)
            rep.mismatches.push_back("spectrum: predicted " + detail::spectrum_str(pred_spec) +
                                     " observed " +
                                     detail::spectrum_str(rep.observed.cycle_spectrum));
        auto pred_trees = detail::predicted_tree_multiset(*rep.predicted);
        auto obs_trees = detail::observed_tree_multiset(rep.observed);
        rep.tree_match = pred_trees == obs_trees;
        if (!rep.tree_match) {
            for (const auto& [len, cycles] : obs_trees) {
                if (pred_trees.count(len) && pred_trees[len] == cycles) continue;
                rep.mismatches.push_back("trees at cycle length " + std::to_string(len) +
                                         " differ from the plan");
            }
            for (const auto& [len, cycles] : pred_trees)
                if (!obs_trees.count(len))
                    rep.mismatches.push_back("predicted cycle length " + std::to_string(len) +
                                             " missing from the graph");
        }
    }
    return rep;
}

inline VerificationReport verify(i64 p, i64 n, i64 k,
                                 std::optional<std::vector<i64>> modulus = std::nullopt,
                                 i64 domain_limit = kDefaultDomainLimit) {
    auto F = std::make_shared<FieldCtx>(FieldCtx::build(p, n, std::move(modulus), domain_limit));
    return verify_on(F, k, domain_limit);
}

// ---- export / import ----

enum class Labeling { dlog, raw };

inline std::string node_label(const FieldCtx& F, i64 index, Labeling lab) {
    if (index == F.q) return "∞";  // infinity sign
    FieldElem x = F.elem_from_code(index);
    if (lab == Labeling::dlog) {
        if (F.is_zero(x)) return "'0'";
        return std::to_string(F.dlog(x));
    }
    std::string s;
    for (i64 i = 0; i < F.n; ++i) s += (i ? "," : "") + std::to_string(x.c[i]);
    return s;
}

// Graphviz text: one edge per node, names quoted.
inline std::string export_graph_dot(const FunctionalGraph& g, Labeling lab = Labeling::dlog) {
    const FieldCtx& F = *g.F;
    std::ostringstream os;
    os << "digraph theta {\n";
    for (i64 i = 0; i < g.domain_size; ++i)
        os << "  \"" << node_label(F, i, lab) << "\" -> \""
           << node_label(F, g.successor[i], lab) << "\";\n";
    os << "}\n";
    return os.str();
}

inline nlohmann::ordered_json graph_to_json(const FunctionalGraph& g, const GraphSummary& s,
                                            Labeling lab = Labeling::dlog) {
    const FieldCtx& F = *g.F;
    nlohmann::ordered_json j;
    j["q"] = F.q;
    j["k"] = g.k;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (i64 i = 0; i < g.domain_size; ++i) nodes.push_back(node_label(F, i, lab));
    j["successor"] = g.successor;
    auto& cycles = j["cycles"] = nlohmann::ordered_json::array();
    auto& trees = j["trees"] = nlohmann::ordered_json::array();
    for (const auto& cyc : s.cycles) {
        cycles.push_back(cyc.nodes);
        trees.push_back(cyc.tree_encodings);
    }
    return j;
}

inline std::string export_graph_json(const FunctionalGraph& g, const GraphSummary& s,
                                     Labeling lab = Labeling::dlog) {
    return graph_to_json(g, s, lab).dump(2) + "\n";
}

struct ImportedGraph {
    i64 q = 0;
    i64 k = 0;
    std::vector<int32_t> successor;
};

inline ImportedGraph import_graph_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ImportedGraph g;
    g.q = j.at("q").get<i64>();
    g.k = j.at("k").get<i64>();
    g.successor = j.at("successor").get<std::vector<int32_t>>();
    if ((i64)g.successor.size() != g.q + 1)
        throw Error(errc::internal, "successor array size does not match q + 1");
    return g;
}

// ---- sweeps ----

struct SweepOptions {
    i64 p_lo = 3, p_hi = 100;
    i64 n_max = 1;
    i64 domain_limit = kDefaultDomainLimit;
    bool with_case1 = true, with_case2 = true, with_case3 = true;
};

struct SweepItemError {
    i64 p, n, k;
    std::string message;
};

struct SweepResult {
    std::vector<VerificationReport> reports;
    std::vector<SweepItemError> errors;

    i64 matched() const {
        i64 c = 0;
        for (const auto& r : reports) c += r.ok();
        return c;
    }
    bool all_ok() const { return errors.empty() && matched() == (i64)reports.size(); }
};

// Every k belonging to one of the three families at the given prime.
inline std::vector<std::pair<i64, CaseTag>> case_ks_for_prime(i64 p, const SweepOptions& opt) {
    std::vector<std::pair<i64, CaseTag>> ks;
    if (opt.with_case1) {
        ks.push_back({mod_inverse(2, p), CaseTag::case1_plus});
        ks.push_back({p - mod_inverse(2, p), CaseTag::case1_minus});
    }
    if (opt.with_case2 && p % 4 == 1) {
        auto cp = case_params(CurveCase::case2, p);
        for (i64 k : cp.k) ks.push_back({k, CaseTag::case2});
    }
    if (opt.with_case3 && (p % 7 == 1 || p % 7 == 2 || p % 7 == 4)) {
        auto cp = case_params(CurveCase::case3, p);
        for (i64 k : cp.k) ks.push_back({k, CaseTag::case3});
    }
    return ks;
}

inline SweepResult sweep(const SweepOptions& opt) {
    SweepResult result;
    for (i64 p : primes_in_range(std::max<i64>(3, opt.p_lo), opt.p_hi)) {
        for (i64 n = 1; n <= opt.n_max; ++n) {
            i128 q = 1;
            for (i64 i = 0; i < n; ++i) q *= p;
            if (q + 1 > opt.domain_limit) break;
            std::shared_ptr<const FieldCtx> F;
            try {
                F = std::make_shared<FieldCtx>(
                    FieldCtx::build(p, n, std::nullopt, opt.domain_limit));
            } catch (const Error& e) {
                result.errors.push_back({p, n, 0, e.what()});
                continue;
            }
            for (auto [k, tag] : case_ks_for_prime(p, opt)) {
                try {
                    auto rep = verify_on(F, k, opt.domain_limit);
                    if (rep.tag != tag)
                        result.errors.push_back({p, n, k, "classification disagrees with sweep"});
                    result.reports.push_back(std::move(rep));
                } catch (const Error& e) {
                    result.errors.push_back({p, n, k, e.what()});
                }
            }
        }
    }
    return result;
}

}  // namespace thetadyn

#endif
