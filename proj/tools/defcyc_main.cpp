// defcyc: first-order definability and logical cyclicity in groups, from
// Cayley tables up to exact computations in Z x Z_m, Q, and Q x Z_2.

#include "defcyc/catalog.hpp"
#include "defcyc/definability.hpp"
#include "defcyc/errors.hpp"
#include "defcyc/eval.hpp"
#include "defcyc/fgabelian.hpp"
#include "defcyc/report.hpp"
#include "defcyc/snf.hpp"
#include "defcyc/suites.hpp"
#include "defcyc/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace defcyc;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

FiniteGroup resolve_group(const std::string& spec) {
    if (auto g = group_by_name(spec)) return *g;
    std::filesystem::path p(spec);
    if (std::filesystem::exists(p)) return load_cay_file(p);
    throw Error("unknown group '" + spec + "' (not a catalog name or .cay file)");
}

std::int64_t env_budget(std::int64_t fallback) {
    const char* v = std::getenv("DEFCYC_BUDGET");
    if (!v || !*v) return fallback;
    try {
        return std::stoll(v);
    } catch (const std::exception&) {
        throw Error("DEFCYC_BUDGET is not an integer");
    }
}

int cmd_analyze(const std::string& group_spec, std::int64_t budget) {
    FiniteGroup g = resolve_group(group_spec);
    AutOptions aut_opts{budget};

    std::cout << "group: " << g.name() << "\n";
    std::cout << "order: " << g.order() << "\n";
    std::cout << "abelian: " << (is_abelian(g) ? "yes" : "no") << "\n";
    std::cout << "cyclic: " << (is_cyclic(g) ? "yes" : "no") << "\n";

    AutGroup a = automorphism_group(g, aut_opts);
    std::cout << "|Aut|: " << a.size() << "\n";

    LogicalCyclicityVerdict v = is_logically_cyclic(g, aut_opts);
    std::cout << "logically cyclic: " << (v.is_logically_cyclic ? "yes" : "no") << "\n";
    std::cout << "logical generators:";
    if (v.generators.size() == 0) std::cout << " none";
    for (int s : v.generators.members()) std::cout << " " << g.element_name(s);
    std::cout << "\n";

    std::cout << "definable closures def_{s}:\n";
    for (int s = 0; s < g.order(); ++s) {
        AutGroup stab = pointwise_stabilizer(a, Subset::of(g, {s}));
        Subset clo = fixed_subgroup(g, stab);
        std::cout << "  s = " << g.element_name(s) << ": size " << clo.size() << " {";
        for (std::size_t i = 0; i < clo.members().size(); ++i)
            std::cout << (i ? ", " : "") << g.element_name(clo.members()[i]);
        std::cout << "}\n";
    }
    return kExitPass;
}

int cmd_aut(const std::string& group_spec, std::int64_t budget) {
    FiniteGroup g = resolve_group(group_spec);
    AutGroup a = automorphism_group(g, AutOptions{budget});
    std::cout << "group: " << g.name() << "  |Aut| = " << a.size() << "\n";
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        std::cout << "  #" << i << ":";
        for (int x = 0; x < g.order(); ++x)
            std::cout << " " << g.element_name(x) << "->" << g.element_name(a.elements[i].map[x]);
        std::cout << "\n";
    }
    return kExitPass;
}

int cmd_verify(const std::string& suite, int max_order, int jobs, const std::string& json_path,
               bool timing, std::int64_t budget) {
    if (!is_suite_name(suite)) {
        std::cerr << "unknown suite '" << suite << "'; available:";
        for (const auto& s : suite_names()) std::cerr << " " << s;
        std::cerr << "\n";
        return kExitUsage;
    }
    SuiteOptions opts;
    opts.max_order = max_order;
    opts.jobs = jobs;
    opts.aut_budget = budget;
    if (std::getenv("DEFCYC_BUDGET")) opts.eval_budget = budget;
    Report r = run_suite(suite, opts);

    std::cout << report_table(r);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw Error("cannot write " + json_path);
        out << report_json(r, timing);
    }
    if (r.failed() > 0) return kExitFail;
    if (r.skipped() > 0) return kExitBudget;
    return kExitPass;
}

int cmd_formula(const std::string& group_spec, const std::string& params_csv,
                const std::string& target_name, bool emit, bool check, int eval_guard,
                std::int64_t budget) {
    FiniteGroup g = resolve_group(group_spec);

    std::vector<int> params;
    std::stringstream ss(params_csv);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) continue;
        int e = g.element_by_name(piece);
        if (e < 0) throw Error("no element named '" + piece + "' in " + g.name());
        params.push_back(e);
    }
    int target = g.element_by_name(target_name);
    if (target < 0) throw Error("no element named '" + target_name + "' in " + g.name());

    Subset s = Subset::of(g, params);
    FormulaPtr phi = cayley_formula(g, s, target);

    if (emit) std::cout << print_formula(*phi, Dialect::Multiplicative) << "\n";
    if (check) {
        if (g.order() > eval_guard) {
            std::cerr << "evaluation refused: |G| = " << g.order() << " exceeds the formula guard "
                      << eval_guard << "\n";
            return kExitBudget;
        }
        EvalOptions eval_opts{budget};
        Subset sols = solutions(g, *phi, "y", {}, eval_opts);
        bool defines = sols.size() == 1 && sols.members()[0] == target;
        std::cout << "defines " << g.element_name(target) << ": " << (defines ? "yes" : "no")
                  << "\n";
        std::cout << "solutions: {";
        for (std::size_t i = 0; i < sols.members().size(); ++i)
            std::cout << (i ? ", " : "") << g.element_name(sols.members()[i]);
        std::cout << "}\n";
        if (!defines) return kExitFail;
    }
    return kExitPass;
}

int cmd_snf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    IntMat a;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::vector<Integer> r;
        std::string tok;
        while (row >> tok) r.emplace_back(tok);
        if (!r.empty()) a.push_back(std::move(r));
    }
    for (const auto& r : a)
        if (r.size() != a[0].size()) throw Error("ragged matrix in " + path);

    SnfResult res = snf(a);
    auto dump = [](const char* label, const IntMat& m) {
        std::cout << label << ":\n";
        for (const auto& row : m) {
            std::cout << " ";
            for (const auto& v : row) std::cout << " " << v;
            std::cout << "\n";
        }
    };
    dump("U", res.u);
    dump("D", res.d);
    dump("V", res.v);
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"defcyc: definability and logical cyclicity in groups"};
    app.set_version_flag("--version", defcyc::kToolkitVersion);
    app.require_subcommand(1);

    std::string group_spec, suite, json_path, params_csv, target_name, matrix_path;
    int max_order = 15, jobs = 1, eval_guard = defcyc::kDefaultFormulaGroupLimit;
    bool timing = false, emit = false, check = false;

    auto* analyze = app.add_subcommand("analyze", "structure and definability summary");
    analyze->add_option("group", group_spec, "catalog name or .cay file")->required();

    auto* verify = app.add_subcommand("verify", "run a theorem-verification suite");
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--max-order", max_order, "catalog order bound");
    verify->add_option("--jobs", jobs, "parallel case execution");
    verify->add_option("--json", json_path, "write the JSON report here");
    verify->add_flag("--timing", timing, "include measured millis in the JSON");

    auto* formula = app.add_subcommand("formula", "emit or check the Cayley-table formula");
    formula->add_option("group", group_spec, "catalog name or .cay file")->required();
    formula->add_option("--params", params_csv, "comma-separated parameter element names");
    formula->add_option("--target", target_name, "target element name")->required();
    formula->add_flag("--emit", emit, "print the formula");
    formula->add_flag("--check", check, "model-check that the formula defines the target");
    formula->add_option("--eval-guard", eval_guard, "largest |G| accepted for checking");

    auto* aut = app.add_subcommand("aut", "list the automorphism group");
    aut->add_option("group", group_spec, "catalog name or .cay file")->required();

    auto* snf_cmd = app.add_subcommand("snf", "Smith normal form of an integer matrix");
    snf_cmd->add_option("matrix", matrix_path, "text file with one matrix row per line")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        std::int64_t budget = env_budget(defcyc::kDefaultAutNodeBudget);
        if (analyze->parsed()) return cmd_analyze(group_spec, budget);
        if (verify->parsed())
            return cmd_verify(suite, max_order, jobs, json_path, timing, budget);
        if (formula->parsed()) {
            if (!emit && !check) {
                std::cerr << "formula: pass --emit and/or --check\n";
                return kExitUsage;
            }
            return cmd_formula(group_spec, params_csv, target_name, emit, check, eval_guard,
                               env_budget(defcyc::kDefaultEvalAtomBudget));
        }
        if (aut->parsed()) return cmd_aut(group_spec, budget);
        if (snf_cmd->parsed()) return cmd_snf(matrix_path);
    } catch (const defcyc::BudgetExceededError& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return kExitBudget;
    } catch (const defcyc::ScaleGuardError& e) {
        std::cerr << "scale refusal: " << e.what() << "\n";
        return kExitBudget;
    } catch (const defcyc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
