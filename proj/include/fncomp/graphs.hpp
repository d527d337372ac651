#ifndef FNCOMP_GRAPHS_HPP
#define FNCOMP_GRAPHS_HPP

#include <string>
#include <vector>

#include "fncomp/bitset.hpp"
#include "fncomp/model.hpp"

namespace fncomp {

constexpr int kDefaultVertexCap = 64;

// Undirected graph on an alphabet (possibly a product alphabet); symmetric,
// irreflexive adjacency stored as bit rows.
struct CharGraph {
    std::vector<std::string> vertices;
    std::vector<Bitset> adj;
    std::string provenance;

    int n() const { return int(vertices.size()); }
    bool edge(int i, int j) const { return adj[size_t(i)].test(j); }
    void add_edge(int i, int j) {
        if (i == j) return;
        adj[size_t(i)].set(j);
        adj[size_t(j)].set(i);
    }
    int edge_count() const;
    std::vector<std::pair<int, int>> edges() const;
    bool is_independent(const Bitset& s) const;
    bool is_complete() const;
    bool same_edges(const CharGraph& other) const;
    CharGraph complement() const;

    static CharGraph empty(std::vector<std::string> labels, std::string prov);
};

// Conditional characteristic graph of `target` given the tuple of `given`
// roles: vertices a,b connected iff some given-assignment has positive joint
// probability with both and f differs there. Roles outside target+given must
// not affect f on the support (else InconsistentF).
CharGraph build_char_graph(const ProblemSpec& spec, Role target, RoleSet given,
                           int vertex_cap = kDefaultVertexCap);

// Characteristic graph of the joint source (X,Y) given Z on the product
// alphabet X x Y.
CharGraph build_joint_char_graph(const ProblemSpec& spec,
                                 int vertex_cap = kDefaultVertexCap);

// Generalized conditional characteristic graph. `message_source` is the role
// (X or Y) whose alphabet the membership family covers; the graph is built on
// the other source's alphabet, conditioning on (message, Z). The membership
// mask determines supports (a masked x counts as in v even at channel
// probability zero). Throws InconsistentFTilde when the family is not an
// independent-set family of the message source's char graph, and
// MembershipViolation when some supported symbol is uncovered or a provided
// channel leaks mass off its mask.
CharGraph build_generalized_graph(
    const ProblemSpec& spec, Role message_source,
    const std::vector<Bitset>& membership,
    const std::vector<std::vector<double>>* channel_rows = nullptr,
    int vertex_cap = kDefaultVertexCap);

struct GraphEqualityHypotheses {
    bool full_support = false;
    bool complete_graph = false;
    bool cond_independent = false;
    bool any() const { return full_support || complete_graph || cond_independent; }
};

GraphEqualityHypotheses graph_equality_hypotheses(const ProblemSpec& spec);

struct GraphEqualityCandidate {
    std::vector<Bitset> family; // V support family over X
    bool equal = false;         // E(G_{Y|V,Z}) == E(G_{Y|X,Z})
    int extra_edges = 0;        // |E(G_{Y|V,Z})| - |E(G_{Y|X,Z})|
};

struct GraphEqualityReport {
    GraphEqualityHypotheses hypotheses;
    int candidates_checked = 0;
    int equal_count = 0;
    bool all_equal = true;
    std::vector<GraphEqualityCandidate> candidates;
};

// Exhaustively checks G_{Y|V,Z} == G_{Y|X,Z} over all covering sub-families of
// Gamma(G_{X|Y,Z}) (multiplicities cannot change a mask-determined graph).
// `budget` caps the number of candidates (BudgetExceeded beyond it).
GraphEqualityReport verify_graph_equality(const ProblemSpec& spec, int budget);

} // namespace fncomp

#endif
