// fncomp: rate regions for distributed computation of a function of
// correlated sources. See README.md for the problem-file schema and examples.
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "fncomp/cli.hpp"

namespace {

void add_problem_flags(CLI::App* cmd, fncomp::RunConfig& cfg) {
    cmd->add_option("--fixture", cfg.fixture,
                    "bundled fixture: ex1 | ex2[:p] | ex3 | ex4 | exinv");
    cmd->add_option("--file", cfg.file, "problem-file path (JSON)");
    cmd->add_option("--out", cfg.out, "write the report to this path");
    cmd->add_option("--format", cfg.format, "json | csv");
    cmd->add_option("--seed", cfg.seed, "deterministic seed (default 0)");
    cmd->add_option("--vertex-cap", cfg.vertex_cap, "graph vertex cap");
    cmd->add_option("--budget", cfg.budget, "candidate enumeration budget");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate regions for computing a function of correlated sources"};
    app.require_subcommand(1);
    fncomp::RunConfig cfg;

    auto* validate = app.add_subcommand("validate", "load and validate a problem");
    add_problem_flags(validate, cfg);
    validate->add_flag("--emit", cfg.emit, "include the normalized document");

    auto* graph = app.add_subcommand("graph", "emit a characteristic graph");
    add_problem_flags(graph, cfg);
    graph->add_option("--target", cfg.target, "graph vertex role (X|Y|Z)");
    graph->add_option("--given", cfg.given, "conditioning roles, comma-separated");
    graph->add_flag("--joint", cfg.joint_graph, "joint graph G_{X,Y|Z}");

    auto* sets = app.add_subcommand("sets", "independent-set families");
    add_problem_flags(sets, cfg);
    sets->add_option("--target", cfg.target, "graph vertex role");
    sets->add_option("--given", cfg.given, "conditioning roles");
    sets->add_flag("--joint", cfg.joint_graph, "use the joint graph");
    bool maximal = false, all = false;
    int multisets_k = -1;
    sets->add_flag("--maximal", maximal, "maximal independent sets (default)");
    sets->add_flag("--all", all, "all independent sets");
    sets->add_option("--multisets", multisets_k,
                     "multisets with total cardinality K (0 = |alphabet|+1)");
    sets->add_flag("--dominated", cfg.dominated,
                   "drop elements strictly contained in another (Example-4 mode)");
    sets->add_flag("!--no-pad", cfg.pad, "do not pad multisets to exact K");

    auto* entropy = app.add_subcommand("entropy", "conditional graph entropy");
    add_problem_flags(entropy, cfg);
    entropy->add_option("--target", cfg.target, "source role");
    entropy->add_option("--given", cfg.given, "conditioning roles");
    entropy->add_option("--family", cfg.family, "maximal | all | multiset[:K]");
    entropy->add_option("--restarts", cfg.restarts, "solver restarts");
    entropy->add_option("--oracle", cfg.oracle_resolution,
                        "also run the grid oracle at this resolution");

    auto* inner = app.add_subcommand("inner", "achievable inner-bound region");
    auto* outer = app.add_subcommand("outer", "explicit outer bound region");
    auto* region = app.add_subcommand("region", "rate-region computations");
    for (CLI::App* cmd : {inner, outer, region}) {
        add_problem_flags(cmd, cfg);
        cmd->add_option("--family", cfg.family, "maximal | all | multiset[:K]");
        cmd->add_option("--kv", cfg.kv, "V-multiset total (0 = |X|+1)");
        cmd->add_option("--kw", cfg.kw, "W-multiset total (0 = |Y|+1)");
        cmd->add_option("--lambdas", cfg.lambdas,
                        "comma-separated sweep directions (default: 64 log-spaced)");
        cmd->add_option("--restarts", cfg.restarts, "solver restarts per solve");
    }
    bool k_inner = false, k_outer = false, k_indep = false, k_pinv = false,
         k_sw = false, k_km = false;
    region->add_flag("--inner", k_inner, "achievable inner bound");
    region->add_flag("--outer", k_outer, "explicit outer bound");
    region->add_flag("--independent", k_indep, "independent-sources region");
    region->add_flag("--partially-invertible", k_pinv, "partially-invertible region");
    region->add_flag("--sw", k_sw, "Slepian-Wolf reference region");
    region->add_flag("--km", k_km, "Korner-Marton reference region");
    region->add_option("--wrt", cfg.wrt, "partially invertible w.r.t. X or Y");

    auto* compare = app.add_subcommand("compare", "compare two region dumps");
    compare->add_option("--a", cfg.compare_a, "region JSON file")->required();
    compare->add_option("--b", cfg.compare_b, "region JSON file")->required();
    compare->add_option("--directions", cfg.directions, "support-fan size");
    compare->add_option("--tol", cfg.tol, "containment tolerance");
    compare->add_option("--out", cfg.out, "write the report to this path");

    auto* laws = app.add_subcommand("laws", "brute-force law checkers");
    add_problem_flags(laws, cfg);
    laws->add_option("--seeds", cfg.seeds, "number of seeded witnesses");
    laws->add_option("--kv", cfg.kv, "V-multiset total");
    laws->add_option("--kw", cfg.kw, "W-multiset total");

    CLI11_PARSE(app, argc, argv);

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "sets") {
        if (all) cfg.sets_mode = "all";
        else if (multisets_k >= 0) {
            cfg.sets_mode = "multisets";
            cfg.multisets_k = multisets_k;
        } else {
            cfg.sets_mode = "maximal";
        }
    }
    if (cfg.subcommand == "region") {
        if (k_inner) cfg.region_kind = "inner";
        else if (k_outer) cfg.region_kind = "outer";
        else if (k_indep) cfg.region_kind = "independent";
        else if (k_pinv) cfg.region_kind = "partially-invertible";
        else if (k_sw) cfg.region_kind = "sw";
        else if (k_km) cfg.region_kind = "km";
    }

    fncomp::RunResult res = fncomp::run(cfg);
    if (cfg.out.empty()) std::fputs(res.output.c_str(), stdout);
    return res.exit_code;
}
