#ifndef FNCOMP_CLI_HPP
#define FNCOMP_CLI_HPP

#include <cstdint>
#include <string>

namespace fncomp {

// Everything a run needs; defaults are recorded in the report so any run is
// reproducible from its own output.
struct RunConfig {
    std::string subcommand;          // validate|graph|sets|entropy|inner|outer|region|compare|laws
    std::string fixture;             // bundled fixture name (ex1, ex2:p, ex3, ex4, exinv)
    std::string file;                // problem file path (alternative to fixture)
    std::string out;                 // output path; empty = stdout (caller prints)
    std::string format = "json";     // json|csv
    std::string target = "X";
    std::string given;               // comma-separated roles; empty = all others
    std::string family = "maximal";  // maximal|all|multiset[:K]
    int kv = 0, kw = 0;              // multiset totals (0 = |alphabet|+1)
    std::string lambdas;             // comma-separated; empty = default grid
    int restarts = -1;               // -1 = per-operation default
    uint64_t seed = 0;
    int vertex_cap = 64;
    long budget = 4096;
    int seeds = 200;                 // laws witnesses
    int directions = 64;             // compare fan size
    double tol = 1e-3;               // compare tolerance
    std::string region_kind;         // inner|outer|independent|partially-invertible|sw|km
    std::string wrt = "X";
    bool joint_graph = false;
    std::string sets_mode = "maximal"; // sets subcommand: maximal|all|multisets
    int multisets_k = 0;
    bool dominated = false;
    bool pad = true;
    bool emit = false;               // validate: include the normalized document
    int oracle_resolution = 0;       // entropy: also run the grid oracle
    std::string compare_a, compare_b; // region dump files for compare
};

struct RunResult {
    int exit_code = 0;
    std::string output;
};

// Dispatches a run and renders the report; never throws (errors become
// exit codes 1/2 with a JSON error payload).
RunResult run(const RunConfig& config);

} // namespace fncomp

#endif
