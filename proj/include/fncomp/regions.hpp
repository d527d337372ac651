#ifndef FNCOMP_REGIONS_HPP
#define FNCOMP_REGIONS_HPP

#include <string>
#include <vector>

#include "fncomp/entropy.hpp"
#include "fncomp/model.hpp"

namespace fncomp {

// One constraint triple {R_X >= a, R_Y >= b, R_X + R_Y >= s} plus the
// candidate and channel witnesses that achieved it.
struct RegionTriple {
    double a = 0.0, b = 0.0, s = 0.0;
    std::string candidate; // generating family / mode
    double lambda = 0.0;   // sweep direction that produced it (0 = direct)
    std::vector<std::vector<double>> chan_v_rows, chan_w_rows; // empty = closed form
};

// Closed up-set in the (R_X, R_Y) quadrant: union of triple regions.
struct RateRegion {
    std::string name;
    std::string kind; // "inner bound" | "outer bound" | "rate region" | ...
    std::vector<RegionTriple> triples;

    bool empty() const { return triples.empty(); }
    // Support value min(R_X + lambda R_Y) over the region.
    double support(double lambda) const;
    double min_rx() const;
    double min_ry() const;
    // Support-achieving corner per direction; nonincreasing-R_Y staircase.
    std::vector<std::pair<double, double>> boundary(
        const std::vector<double>& lambdas) const;
};

std::vector<double> default_lambda_grid(); // 64 log-spaced in [1/32,32] plus 1

struct RegionOptions {
    FamilyChoice mode;                  // inner-bound family mode
    int kv = 0, kw = 0;                 // multiset totals (0 -> |alphabet|+1)
    std::vector<double> lambdas;        // empty -> default grid
    SolverOptions solver{.restarts = 32};
    long max_candidates = 4096;
    int vertex_cap = kDefaultVertexCap;
};

// Achievable inner bound: union over admissible (V,W) support families and
// swept directions of the achieved triples.
RateRegion inner_bound_region(const ProblemSpec& spec, const RegionOptions& opts);

// Explicit outer bound (single triple of graph entropies).
RateRegion outer_bound_region(const ProblemSpec& spec, const RegionOptions& opts);

// Exact region for conditionally independent sources (rectangle).
RateRegion independent_sources_region(const ProblemSpec& spec,
                                      const RegionOptions& opts);

// Exact region for a partially invertible f (union over W-multisets).
RateRegion partially_invertible_region(const ProblemSpec& spec, Role wrt,
                                       const RegionOptions& opts);

RateRegion slepian_wolf_region(const ProblemSpec& spec);
RateRegion korner_marton_region(const ProblemSpec& spec);

struct CompareReport {
    bool a_subset_b = false;
    bool b_subset_a = false;
    // Signed support-function extremes of h_A - h_B over the fan (plus axis
    // thresholds); A is contained in B iff the minimum stays above -tol.
    double min_diff = 0.0, max_diff = 0.0;
    double witness_min = 0.0, witness_max = 0.0; // directions attaining them
    double tol = 0.0;
};

CompareReport region_compare(const RateRegion& a, const RateRegion& b,
                             int directions, double tol);

// Admissibility-order cross-validation: every candidate accepted via the
// V-first order must validate via the W-first order, and conversely.
struct OrderEquivalenceReport {
    long candidates_v_first = 0;
    long candidates_w_first = 0;
    long agreed = 0;
    bool all_agree = true;
};
OrderEquivalenceReport check_condition_orders(const ProblemSpec& spec, int kv,
                                              int kw, long max_candidates);

} // namespace fncomp

#endif
