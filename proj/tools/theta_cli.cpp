// Command-line front end: predict, build, verify, sweep and export for the
// functional graphs of x -> k*(x + 1/x) over P^1(F_q).
//
// Exit codes: 0 full match (or informational success), 2 structural
// mismatch, 1 error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <thetadyn/harness.hpp>

using namespace thetadyn;

namespace {

i64 env_limit() {
    if (const char* v = std::getenv("THETA_BF_LIMIT")) {
        try {
            return std::stoll(v);
        } catch (...) {
            std::cerr << "warning: ignoring unparsable THETA_BF_LIMIT\n";
        }
    }
    return kDefaultDomainLimit;
}

std::optional<std::vector<i64>> parse_modulus(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::vector<i64> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) coeffs.push_back(std::stoll(item));
    return coeffs;
}

void print_report(const StructureReport& rep) {
    std::cout << "case: " << rep.case_name << "\n";
    std::cout << "predicted spectrum: " << detail::spectrum_str(rep.spectrum()) << "\n";
    std::cout << "classes:\n";
    for (const auto& cls : rep.classes)
        std::cout << "  length " << cls.length << " x " << cls.count << "  [" << cls.note
                  << "]\n";
    std::cout << "tree plan:\n";
    for (const auto& tp : rep.tree_plan)
        std::cout << "  " << tp.root_class << ": depth " << tp.depth << "  " << tp.shape << "\n";
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
}

void print_summary(const GraphSummary& s) {
    std::cout << "observed spectrum: " << detail::spectrum_str(s.cycle_spectrum) << "\n";
    std::cout << "components: " << s.component_count() << "\n";
    std::cout << "indegrees:";
    for (auto [deg, cnt] : s.indegree_histogram) std::cout << " " << deg << ":" << cnt;
    std::cout << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"cycle and tree structure of the maps x -> k(x + 1/x) over P^1(F_q)"};
    app.require_subcommand(1);

    i64 p = 0, n = 1, k = 0;
    i64 limit = env_limit();
    std::string modulus_text, format = "dot", labeling = "dlog", out_path;

    auto add_field_opts = [&](CLI::App* cmd, bool need_k) {
        cmd->add_option("--p,-p", p, "characteristic (odd prime)")->required();
        cmd->add_option("--n", n, "extension degree, q = p^n");
        if (need_k) cmd->add_option("--k", k, "map parameter, nonzero mod p")->required();
        cmd->add_option("--modulus", modulus_text,
                        "defining polynomial, comma-separated coefficients c0,c1,...,1");
        cmd->add_option("--limit", limit, "brute-force domain bound (q+1 must fit)");
    };

    auto* cmd_predict = app.add_subcommand("predict", "closed-form structure prediction");
    add_field_opts(cmd_predict, true);

    auto* cmd_build = app.add_subcommand("build", "brute-force graph construction and summary");
    add_field_opts(cmd_build, true);

    auto* cmd_verify = app.add_subcommand("verify", "prediction against brute force");
    add_field_opts(cmd_verify, true);

    auto* cmd_export = app.add_subcommand("export", "write the graph as DOT or JSON");
    add_field_opts(cmd_export, true);
    cmd_export->add_option("--format", format, "dot | json")
        ->check(CLI::IsMember({"dot", "json"}));
    cmd_export->add_option("--labeling", labeling, "dlog | raw")
        ->check(CLI::IsMember({"dlog", "raw"}));
    cmd_export->add_option("--out,-o", out_path, "output file (default stdout)");

    i64 pmin = 3, pmax = 100, nmax = 1;
    std::string cases = "case1,case2,case3";
    auto* cmd_sweep = app.add_subcommand("sweep", "verify all symmetric k over a prime range");
    cmd_sweep->add_option("--pmin", pmin, "lower bound of the prime range");
    cmd_sweep->add_option("--pmax", pmax, "upper bound of the prime range");
    cmd_sweep->add_option("--nmax", nmax, "largest extension degree");
    cmd_sweep->add_option("--cases", cases, "comma-separated subset of case1,case2,case3");
    cmd_sweep->add_option("--limit", limit, "brute-force domain bound");

    CLI11_PARSE(app, argc, argv);

    if (cmd_predict->parsed()) {
        auto F = FieldCtx::build(p, n, parse_modulus(modulus_text), limit);
        auto cls = classify_k(p, k);
        if (cls.tag == CaseTag::generic) {
            std::cerr << "k = " << mod_reduce(k, p)
                      << " is generic: no closed-form prediction applies\n";
            return 1;
        }
        std::cout << "q = " << F.q << ", k = " << mod_reduce(k, p) << "\n";
        print_report(predict_structure(F, k, cls, limit));
        return 0;
    }

    if (cmd_build->parsed()) {
        auto F = std::make_shared<FieldCtx>(FieldCtx::build(p, n, parse_modulus(modulus_text),
                                                            limit));
        auto g = build_graph(ThetaMap(*F, k), limit);
        auto s = summarize(g);
        std::cout << "q = " << F->q << ", k = " << mod_reduce(k, F->p) << ", nodes = "
                  << g.domain_size << "\n";
        print_summary(s);
        return 0;
    }

    if (cmd_verify->parsed()) {
        auto rep = verify(p, n, k, parse_modulus(modulus_text), limit);
        std::cout << "p = " << rep.p << ", n = " << rep.n << ", k = " << rep.k << " ["
                  << case_tag_name(rep.tag) << "]\n";
        print_summary(rep.observed);
        if (!rep.has_prediction) {
            std::cout << "generic k: observed-only report, no theory coverage claimed\n";
            return 0;
        }
        print_report(*rep.predicted);
        std::cout << "spectrum_match: " << (rep.spectrum_match ? "yes" : "no") << "\n";
        std::cout << "tree_match: " << (rep.tree_match ? "yes" : "no") << "\n";
        for (const auto& mm : rep.mismatches) std::cout << "mismatch: " << mm << "\n";
        std::cout << "timing: predict " << rep.ms_predict << " ms, build " << rep.ms_build
                  << " ms, summarize " << rep.ms_summarize << " ms\n";
        return rep.ok() ? 0 : 2;
    }

    if (cmd_export->parsed()) {
        auto F = std::make_shared<FieldCtx>(FieldCtx::build(p, n, parse_modulus(modulus_text),
                                                            limit));
        auto g = build_graph(ThetaMap(*F, k), limit);
        Labeling lab = labeling == "raw" ? Labeling::raw : Labeling::dlog;
        std::string payload = format == "json" ? export_graph_json(g, summarize(g), lab)
                                               : export_graph_dot(g, lab);
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot open " << out_path << "\n";
                return 1;
            }
            out << payload;
        }
        return 0;
    }

    // sweep
    SweepOptions opt;
    opt.p_lo = pmin;
    opt.p_hi = pmax;
    opt.n_max = nmax;
    opt.domain_limit = limit;
    opt.with_case1 = cases.find("case1") != std::string::npos;
    opt.with_case2 = cases.find("case2") != std::string::npos;
    opt.with_case3 = cases.find("case3") != std::string::npos;
    auto result = sweep(opt);
    for (const auto& r : result.reports)
        std::cout << "p=" << r.p << " n=" << r.n << " k=" << r.k << " [" << case_tag_name(r.tag)
                  << "] spectrum " << detail::spectrum_str(r.observed.cycle_spectrum) << " "
                  << (r.ok() ? "match" : "MISMATCH") << "\n";
    for (const auto& e : result.errors)
        std::cout << "p=" << e.p << " n=" << e.n << " k=" << e.k << " error: " << e.message
                  << "\n";
    std::cout << result.matched() << "/" << result.reports.size() << " verified, "
              << result.errors.size() << " errors\n";
    return result.all_ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
