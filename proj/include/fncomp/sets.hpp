#ifndef FNCOMP_SETS_HPP
#define FNCOMP_SETS_HPP

#include <functional>
#include <string>
#include <vector>

#include "fncomp/bitset.hpp"
#include "fncomp/graphs.hpp"

namespace fncomp {

// Canonically sorted list of vertex subsets of one graph (by size, then bits).
struct SetFamily {
    std::vector<Bitset> elems;
    void canonicalize();
    std::vector<std::string> to_strings(const std::vector<std::string>& labels) const;
};

// All nonempty independent sets, backtracking with bit-vector pruning.
SetFamily independent_sets(const CharGraph& g);
// Exactly the maximal independent sets: pivoting clique enumeration on the
// complement graph.
SetFamily maximal_independent_sets(const CharGraph& g);

struct MultiElem {
    Bitset set;
    int mult = 1;
};

struct MultiFamily {
    std::vector<MultiElem> elems; // canonical (size, bits) order
    int total() const;
    // One mask per message value, multiplicity expanded.
    std::vector<Bitset> expand() const;
    std::vector<std::string> to_strings(const std::vector<std::string>& labels) const;
    std::string label(const std::vector<std::string>& labels) const;
    bool operator==(const MultiFamily& o) const;
};

struct MultisetOptions {
    int total = 0;              // cardinality bound K
    bool exact_total = false;   // emit only total == K (disables padding logic)
    bool require_cover = true;  // every cover symbol in >= 1 element
    bool cap_singletons = true; // repeated singleton copies are provably redundant
    bool drop_dominated = false;// Example-4-step-3 mode: drop strictly contained elems
    bool pad_to_total = false;  // pad emitted multisets to K with zero-weight copies
};

// Streams multisets of `family` (canonical order, no duplicates). `cover` is
// the symbol set that must be covered when require_cover is on. The callback
// returns false to stop early.
void for_each_multiset(const SetFamily& family, const Bitset& cover,
                       const MultisetOptions& opts,
                       const std::function<bool(const MultiFamily&)>& emit);

std::vector<MultiFamily> multisets(const SetFamily& family, const Bitset& cover,
                                   const MultisetOptions& opts);

// Support set S_X(V) of a coupling p(v,x): per positive-probability v-value,
// its index and support subset. Zero-probability values are dropped and
// recorded.
struct SupportSet {
    struct Entry {
        int index;   // original v index
        Bitset set;  // {x : p(v,x) > 0}
    };
    std::vector<Entry> entries;
    std::vector<int> dropped; // v indices with zero marginal
};

// rows[x][v] = p(v|x) against marginal px; support masks from strictly
// positive joint cells.
SupportSet support_set(const std::vector<std::vector<double>>& rows,
                       const std::vector<double>& px);

} // namespace fncomp

#endif
