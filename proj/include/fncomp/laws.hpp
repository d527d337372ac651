#ifndef FNCOMP_LAWS_HPP
#define FNCOMP_LAWS_HPP

#include <cstdint>
#include <vector>

#include "fncomp/entropy.hpp"
#include "fncomp/model.hpp"

namespace fncomp {

// Full joint p(v,x,y,w,z) built from the factorization
// p(x,y,z) p(v|x) p(w|y), with the Markov chains verified numerically.
struct JointWitness {
    Channel chanV, chanW;
    Pmf joint; // axes X,Y,Z,V,W
    bool chain_v_ok = false; // V - X - (Y,W,Z) at 1e-12
    bool chain_w_ok = false; // (V,X,Z) - Y - W at 1e-12
};

JointWitness make_witness(const ProblemSpec& spec, const Channel& chanV,
                          const Channel& chanW);

// Seeded admissible witness: random V-multiset of Gamma(G_{X|Y,Z}), Dirichlet
// channel, then a random W-multiset of the induced Gamma(G_{Y|V,Z}).
JointWitness random_admissible_witness(const ProblemSpec& spec, uint64_t seed,
                                       int kv = 0, int kw = 0);

struct ZeroErrorResult {
    bool entropy_side = false;  // H(f(X,Y,Z) | V,W,Z) == 0 (1e-12)
    bool pairwise_side = false; // the positive-pair condition
    bool value() const { return entropy_side && pairwise_side; }
};

// Evaluates BOTH sides of the zero-error equivalence and asserts they agree
// (EquivalenceViolation otherwise).
ZeroErrorResult zero_error_check(const ProblemSpec& spec, const JointWitness& w);

struct SupportEquivalenceReport {
    bool abstained = false;   // chains failed; nothing else evaluated
    bool chain_v = false, chain_w = false;
    // Proof sub-claims:
    bool claim_a = false;     // X in S_X(V), Y in S_Y(W)
    bool claim_b = false;     // chains survive the support-set relabeling
    bool claim_c = false;     // zero-error <-> pairwise condition
    bool claim_d = false;     // memberships <-> pairwise condition
    bool zero_error = false;
    bool membership_v = false; // S_X(V) in M(Gamma(G_{X|Y,Z}))
    bool membership_w = false; // S_Y(W) in M(Gamma(G_{Y|S_X(V),Z}))
    bool forward_ok = false;   // zero-error + chains => memberships
    bool backward_ok = false;  // memberships + chains => zero-error
    bool all_ok() const {
        return !abstained && claim_a && claim_b && claim_c && claim_d &&
               forward_ok && backward_ok;
    }
};

SupportEquivalenceReport support_equivalence_check(const ProblemSpec& spec,
                                                   const JointWitness& w);

// Relabeling a channel by its support sets never changes the rate triple
// (returns the max absolute difference across the three coordinates).
double support_relabel_drift(const ProblemSpec& spec, const Channel& chanV,
                             const Channel& chanW);

} // namespace fncomp

#endif
