#ifndef FNCOMP_ENTROPY_HPP
#define FNCOMP_ENTROPY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fncomp/graphs.hpp"
#include "fncomp/model.hpp"
#include "fncomp/sets.hpp"

namespace fncomp {

// Conditional pmf p(v|t) with a membership mask: rows[t] lives on the simplex
// restricted to {v : t in masks[v]}.
struct Channel {
    std::vector<Bitset> masks;              // per message value, over the source alphabet
    std::vector<std::vector<double>> rows;  // rows[t][v] = p(v|t)

    int values() const { return int(masks.size()); }
    int source_size() const { return int(rows.size()); }
    // Rows sum to 1 (1e-12) where pt > 0, masked-out entries exactly 0, every
    // positive-probability symbol covered by some mask.
    void validate(const std::vector<double>& pt) const;
};

Channel uniform_channel(const std::vector<Bitset>& masks, int nt);
// Dirichlet(1) rows on the mask, floored at `floor_eps` before renormalizing.
Channel dirichlet_channel(const std::vector<Bitset>& masks, int nt,
                          uint64_t seed, double floor_eps);

struct SolverOptions {
    long max_iters = 100000;
    double rel_tol = 1e-9;
    int restarts = 8;        // block-coordinate (scalarized) solves default to 32
    uint64_t seed = 0;
    double init_floor = 1e-6;
};

struct SolveReport {
    double value = 0.0;
    Channel argmin;
    MultiFamily family;      // achieving support family
    long iterations = 0;
    bool converged = true;   // false = some restart hit max_iters (best value kept)
    int restarts_used = 0;
    double restart_spread = 0.0; // max-min across restarts (convexity check)
    int families_tried = 0;
};

enum class FamilyMode { Maximal, All, Multiset };
struct FamilyChoice {
    FamilyMode mode = FamilyMode::Maximal;
    int k = 0; // multiset total cardinality; 0 -> |alphabet|+1
};
FamilyChoice parse_family_choice(const std::string& text);
std::string family_choice_name(const FamilyChoice& mode);

// min I(V;T|C) over channels restricted to `masks`; p_tc[t][c] is the joint of
// the target with the flattened conditioning tuple.
SolveReport solve_single_family(const std::vector<std::vector<double>>& p_tc,
                                const std::vector<Bitset>& masks,
                                const SolverOptions& opts);

// Same minimization ranging over the families generated from graph `g` per
// `mode`; the three modes agree within tolerance.
SolveReport graph_entropy_families(const CharGraph& g,
                                   const std::vector<std::vector<double>>& p_tc,
                                   FamilyChoice mode, const SolverOptions& opts);

// H_G(target|given) for a source role.
SolveReport conditional_graph_entropy(const ProblemSpec& spec, Role target,
                                      RoleSet given, FamilyChoice mode,
                                      const SolverOptions& opts = {},
                                      int vertex_cap = kDefaultVertexCap);

// Joint p(target, flattened given-context) as a matrix.
std::vector<std::vector<double>> target_context_matrix(const ProblemSpec& spec,
                                                       Role target, RoleSet given);

// ---------------------------------------------------------------- rate triples

struct RateTriple {
    double a = 0.0; // I(V;X|W,Z)
    double b = 0.0; // I(Y;W|V,Z)
    double s = 0.0; // I(V;X|Z) + I(Y;W|V,Z)
};

// Evaluates the triple at fixed channels through the generic pmf machinery;
// validates admissibility (masks, Markov factorization is by construction).
// Throws MaskError when chanW's masks are not independent in G_{Y|V,Z}.
RateTriple rate_triple(const ProblemSpec& spec, const Channel& chanV,
                       const Channel& chanW);

// Support value of the triple's region in direction (1, lambda):
// corner (s-b, b) for lambda <= 1, corner (a, s-a) for lambda >= 1.
double scalarize(const RateTriple& t, double lambda);

struct PairSolveReport {
    RateTriple triple;
    double objective = 0.0;
    Channel chanV, chanW;
    long iterations = 0;
    bool converged = true;
};

// Scalarized objective at an explicit channel point; optionally fills the
// per-row gradients. Diagnostic surface for the block-descent solver.
double pair_objective(const ProblemSpec& spec, const std::vector<Bitset>& masksV,
                      const std::vector<Bitset>& masksW, double lambda,
                      const std::vector<std::vector<double>>& rows_v,
                      const std::vector<std::vector<double>>& rows_w,
                      std::vector<std::vector<double>>* grad_v = nullptr,
                      std::vector<std::vector<double>>* grad_w = nullptr);

// Block-coordinate descent (V rows / W rows alternating exponentiated-gradient
// steps) on the scalarized objective for fixed mask families; multistart.
PairSolveReport solve_pair_scalarized(const ProblemSpec& spec,
                                      const std::vector<Bitset>& masksV,
                                      const std::vector<Bitset>& masksW,
                                      double lambda, const SolverOptions& opts);

// ---------------------------------------------------------------- grid oracle

struct OracleResult {
    double value = 0.0;  // minimum over the simplex grid (upper bound on optimum)
    double gap = 0.0;    // continuity bound on grid-to-optimum distance
    long points = 0;
};

constexpr long kOracleMaxPoints = 10'000'000;

OracleResult grid_oracle_entropy(const std::vector<std::vector<double>>& p_tc,
                                 const std::vector<Bitset>& masks, int resolution,
                                 long max_points = kOracleMaxPoints);

OracleResult grid_oracle_scalarized(const ProblemSpec& spec,
                                    const std::vector<Bitset>& masksV,
                                    const std::vector<Bitset>& masksW,
                                    double lambda, int resolution,
                                    long max_points = kOracleMaxPoints);

} // namespace fncomp

#endif
