#include "doctest.h"

#include <algorithm>
#include <set>

#include "fncomp/fixtures.hpp"
#include "fncomp/graphs.hpp"
#include "fncomp/rng.hpp"
#include "fncomp/sets.hpp"

using namespace fncomp;

namespace {

CharGraph random_graph(int n, double density, uint64_t seed) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    CharGraph g = CharGraph::empty(labels, "random");
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < density) g.add_edge(i, j);
    return g;
}

// Brute-force independent sets by subset enumeration (n <= 20).
std::set<std::vector<int>> brute_independent(const CharGraph& g) {
    std::set<std::vector<int>> out;
    const int n = g.n();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && g.edge(i, j)) ok = false;
        if (ok) {
            std::vector<int> v;
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) v.push_back(i);
            out.insert(v);
        }
    }
    return out;
}

std::set<std::vector<int>> as_sorted_sets(const SetFamily& fam) {
    std::set<std::vector<int>> out;
    for (const Bitset& s : fam.elems) out.insert(s.bits());
    return out;
}

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

SetFamily family_of(int universe, std::vector<std::vector<int>> sets) {
    SetFamily fam;
    for (const auto& s : sets) {
        Bitset b(universe);
        for (int x : s) b.set(x);
        fam.elems.push_back(b);
    }
    fam.canonicalize();
    return fam;
}

} // namespace

TEST_CASE("Example 1 independent-set families") {
    ProblemSpec spec = fixture("ex1");
    CharGraph g = build_char_graph(spec, Role::X, roles(Role::Y));
    CHECK(independent_sets(g).to_strings(spec.alphabet_X) ==
          std::vector<std::string>{"{1}", "{2}", "{3}", "{4}", "{1,2}", "{2,3}",
                                   "{3,4}"});
    CHECK(maximal_independent_sets(g).to_strings(spec.alphabet_X) ==
          std::vector<std::string>{"{1,2}", "{2,3}", "{3,4}"});
}

TEST_CASE("edgeless and complete graphs") {
    CharGraph edgeless = random_graph(5, 0.0, 1);
    CHECK(independent_sets(edgeless).elems.size() == 31); // 2^5 - 1
    CHECK(maximal_independent_sets(edgeless).elems.size() == 1);

    CharGraph complete = random_graph(4, 1.1, 1);
    CHECK(independent_sets(complete).elems.size() == 4);
    CHECK(maximal_independent_sets(complete).elems.size() == 4);
}

TEST_CASE("enumerators agree with brute force on random graphs") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        int n = 3 + int(seed % 10); // up to 12 vertices
        CharGraph g = random_graph(n, 0.15 + 0.06 * double(seed % 9), 500 + seed);
        auto brute = brute_independent(g);
        CHECK(as_sorted_sets(independent_sets(g)) == brute);

        // Maximal = independent sets with no proper independent superset.
        std::set<std::vector<int>> brute_maximal;
        for (const auto& s : brute) {
            bool maximal = true;
            for (const auto& t : brute)
                if (t.size() > s.size() &&
                    std::includes(t.begin(), t.end(), s.begin(), s.end()))
                    maximal = false;
            if (maximal) brute_maximal.insert(s);
        }
        CHECK(as_sorted_sets(maximal_independent_sets(g)) == brute_maximal);

        // Every independent set is contained in some maximal one.
        SetFamily maximal = maximal_independent_sets(g);
        for (const Bitset& s : independent_sets(g).elems) {
            bool contained = false;
            for (const Bitset& m : maximal.elems)
                if (s.is_subset_of(m)) contained = true;
            CHECK(contained);
            CHECK(g.is_independent(s));
        }
    }
}

TEST_CASE("Example 4 reduced multiset enumeration") {
    ProblemSpec spec = fixture("ex4");
    CharGraph g = build_char_graph(spec, Role::Y, roles(Role::X));
    SetFamily gamma = independent_sets(g);
    CHECK(gamma.to_strings(spec.alphabet_Y) ==
          std::vector<std::string>{"{0}", "{1}", "{2}", "{0,2}"});

    Bitset cover(3);
    for (int i = 0; i < 3; ++i) cover.set(i);
    MultisetOptions opts;
    opts.total = 4;
    opts.drop_dominated = true;
    opts.pad_to_total = true;
    std::vector<MultiFamily> out = multisets(gamma, cover, opts);
    REQUIRE(out.size() == 1);
    CHECK(out[0].to_strings(spec.alphabet_Y) ==
          std::vector<std::string>{"{1}", "{0,2}", "{0,2}", "{0,2}"});
}

TEST_CASE("padding duplicates the single element when needed") {
    SetFamily fam = family_of(1, {{0}});
    Bitset cover(1);
    cover.set(0);
    MultisetOptions opts;
    opts.total = 2;
    opts.pad_to_total = true;
    std::vector<MultiFamily> out = multisets(fam, cover, opts);
    REQUIRE(out.size() == 1);
    CHECK(out[0].total() == 2);
    CHECK(out[0].elems.size() == 1);
    CHECK(out[0].elems[0].mult == 2);
}

TEST_CASE("uncoverable alphabet yields an empty stream") {
    SetFamily fam = family_of(2, {{0}});
    Bitset cover(2);
    cover.set(0);
    cover.set(1); // symbol 1 not in any element
    MultisetOptions opts;
    opts.total = 3;
    CHECK(multisets(fam, cover, opts).empty());
}

TEST_CASE("raw multiset count matches the multiset coefficient") {
    for (int n = 1; n <= 5; ++n)
        for (int k = 1; k <= 5; ++k) {
            std::vector<std::vector<int>> sets;
            for (int i = 0; i < n; ++i) sets.push_back({i, (i + 1) % std::max(n, 2)});
            SetFamily fam = family_of(std::max(n, 2), sets);
            if (int(fam.elems.size()) != n) continue; // dedup collapsed something
            MultisetOptions opts;
            opts.total = k;
            opts.exact_total = true;
            opts.require_cover = false;
            opts.cap_singletons = false;
            Bitset cover(std::max(n, 2));
            CHECK(long(multisets(fam, cover, opts).size()) ==
                  binomial(n + k - 1, k));
        }
}

TEST_CASE("singleton multiplicities are capped") {
    SetFamily fam = family_of(2, {{0}, {1}, {0, 1}});
    Bitset cover(2);
    cover.set(0);
    cover.set(1);
    MultisetOptions opts;
    opts.total = 4;
    for (const MultiFamily& mf : multisets(fam, cover, opts))
        for (const MultiElem& e : mf.elems)
            if (e.set.count() == 1) CHECK(e.mult == 1);
}

TEST_CASE("dominated mode drops strictly contained elements") {
    SetFamily fam = family_of(3, {{0}, {1}, {2}, {0, 2}});
    Bitset cover(3);
    for (int i = 0; i < 3; ++i) cover.set(i);
    MultisetOptions opts;
    opts.total = 3;
    opts.drop_dominated = true;
    for (const MultiFamily& mf : multisets(fam, cover, opts))
        for (const MultiElem& e : mf.elems) {
            CHECK(e.set.bits() != std::vector<int>{0});
            CHECK(e.set.bits() != std::vector<int>{2});
        }
}

TEST_CASE("support sets") {
    // Identity coupling: singleton supports with distinct indices.
    std::vector<std::vector<double>> rows = {{1.0, 0.0}, {0.0, 1.0}};
    std::vector<double> px = {0.5, 0.5};
    SupportSet ss = support_set(rows, px);
    REQUIRE(ss.entries.size() == 2);
    CHECK(ss.entries[0].set.bits() == std::vector<int>{0});
    CHECK(ss.entries[1].set.bits() == std::vector<int>{1});
    CHECK(ss.entries[0].index != ss.entries[1].index);

    // Two values with the same support keep distinct indices.
    std::vector<std::vector<double>> rep = {{0.3, 0.7, 0.0}, {0.6, 0.4, 0.0}};
    SupportSet ss2 = support_set(rep, px);
    REQUIRE(ss2.entries.size() == 2);
    CHECK(ss2.entries[0].set == ss2.entries[1].set);
    CHECK(ss2.entries[0].index != ss2.entries[1].index);
    CHECK(ss2.dropped == std::vector<int>{2}); // zero column dropped

    // Zero-probability x never enters a support.
    std::vector<double> px_hole = {1.0, 0.0};
    SupportSet ss3 = support_set(rep, px_hole);
    for (const auto& e : ss3.entries) CHECK_FALSE(e.set.test(1));
}
