#include "fncomp/sets.hpp"

#include <algorithm>
#include <set>

namespace fncomp {

void SetFamily::canonicalize() {
    std::sort(elems.begin(), elems.end(),
              [](const Bitset& a, const Bitset& b) { return a.canonical_less(b); });
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
}

std::vector<std::string> SetFamily::to_strings(
    const std::vector<std::string>& labels) const {
    std::vector<std::string> out;
    out.reserve(elems.size());
    for (const Bitset& s : elems) out.push_back(s.to_string(labels));
    return out;
}

SetFamily independent_sets(const CharGraph& g) {
    SetFamily fam;
    const int n = g.n();
    std::vector<int> stack;
    // cand always holds vertices > last chosen and non-adjacent to all chosen.
    std::function<void(Bitset, Bitset)> recurse = [&](Bitset cur, Bitset cand) {
        for (int v : cand.bits()) {
            Bitset next = cur;
            next.set(v);
            fam.elems.push_back(next);
            Bitset next_cand = cand;
            next_cand.subtract(g.adj[size_t(v)]);
            for (int u = 0; u <= v; ++u) next_cand.reset(u);
            if (next_cand.any()) recurse(next, next_cand);
        }
    };
    Bitset all(n);
    for (int v = 0; v < n; ++v) all.set(v);
    recurse(Bitset(n), all);
    fam.canonicalize();
    return fam;
}

namespace {

// Bron-Kerbosch with pivoting on the complement graph: cliques of the
// complement are exactly the independent sets of g.
void bron_kerbosch(const std::vector<Bitset>& nbr, Bitset r, Bitset p, Bitset x,
                   std::vector<Bitset>& out) {
    if (p.none() && x.none()) {
        out.push_back(r);
        return;
    }
    // Pivot: vertex of p|x with most neighbours in p.
    int pivot = -1, best = -1;
    Bitset px = p | x;
    for (int u : px.bits()) {
        int deg = (p & nbr[size_t(u)]).count();
        if (deg > best) { best = deg; pivot = u; }
    }
    Bitset ext = p.minus(nbr[size_t(pivot)]);
    for (int v : ext.bits()) {
        Bitset r2 = r;
        r2.set(v);
        bron_kerbosch(nbr, r2, p & nbr[size_t(v)], x & nbr[size_t(v)], out);
        p.reset(v);
        x.set(v);
    }
}

} // namespace

SetFamily maximal_independent_sets(const CharGraph& g) {
    const int n = g.n();
    std::vector<Bitset> comp_nbr(static_cast<size_t>(n), Bitset(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !g.edge(i, j)) comp_nbr[size_t(i)].set(j);
    Bitset p(n);
    for (int v = 0; v < n; ++v) p.set(v);
    SetFamily fam;
    bron_kerbosch(comp_nbr, Bitset(n), p, Bitset(n), fam.elems);
    fam.canonicalize();
    return fam;
}

// ---------------------------------------------------------------- multisets

int MultiFamily::total() const {
    int t = 0;
    for (const auto& e : elems) t += e.mult;
    return t;
}

std::vector<Bitset> MultiFamily::expand() const {
    std::vector<Bitset> out;
    for (const auto& e : elems)
        for (int i = 0; i < e.mult; ++i) out.push_back(e.set);
    return out;
}

std::vector<std::string> MultiFamily::to_strings(
    const std::vector<std::string>& labels) const {
    std::vector<std::string> out;
    for (const auto& e : elems)
        for (int i = 0; i < e.mult; ++i) out.push_back(e.set.to_string(labels));
    return out;
}

std::string MultiFamily::label(const std::vector<std::string>& labels) const {
    std::string s = "{";
    bool first = true;
    for (const std::string& e : to_strings(labels)) {
        if (!first) s += ",";
        s += e;
        first = false;
    }
    return s + "}";
}

bool MultiFamily::operator==(const MultiFamily& o) const {
    if (elems.size() != o.elems.size()) return false;
    for (size_t i = 0; i < elems.size(); ++i)
        if (elems[i].mult != o.elems[i].mult || elems[i].set != o.elems[i].set)
            return false;
    return true;
}

namespace {

struct MultiKey {
    std::vector<std::pair<int, int>> items; // (family index, mult)
    bool operator<(const MultiKey& o) const { return items < o.items; }
};

} // namespace

void for_each_multiset(const SetFamily& family, const Bitset& cover,
                       const MultisetOptions& opts,
                       const std::function<bool(const MultiFamily&)>& emit) {
    if (opts.total < 1) return;

    // Working family after dominated-element pruning.
    std::vector<int> active;
    for (int i = 0; i < int(family.elems.size()); ++i) {
        bool dominated = false;
        if (opts.drop_dominated) {
            for (int j = 0; j < int(family.elems.size()) && !dominated; ++j)
                if (j != i &&
                    family.elems[size_t(i)].is_subset_of(family.elems[size_t(j)]) &&
                    family.elems[size_t(i)] != family.elems[size_t(j)])
                    dominated = true;
        }
        if (!dominated) active.push_back(i);
    }
    const int na = int(active.size());
    if (na == 0) return;

    // Suffix coverage for pruning: union of elements from position i on.
    const int universe = family.elems.empty() ? cover.universe()
                                              : family.elems[0].universe();
    std::vector<Bitset> suffix_cover(size_t(na) + 1, Bitset(universe));
    for (int i = na - 1; i >= 0; --i) {
        suffix_cover[size_t(i)] = suffix_cover[size_t(i) + 1];
        suffix_cover[size_t(i)] |= family.elems[size_t(active[size_t(i)])];
    }

    // Canonical padding target: largest active element by (size, bits).
    int pad_elem = -1;
    for (int i = 0; i < na; ++i)
        if (pad_elem < 0 ||
            family.elems[size_t(active[size_t(pad_elem)])].canonical_less(
                family.elems[size_t(active[size_t(i)])]))
            pad_elem = i;

    std::set<MultiKey> seen; // dedup needed only when padding collapses forms
    std::vector<int> mult(size_t(na), 0);
    bool stop = false;

    std::function<void(int, int, Bitset)> recurse = [&](int i, int used, Bitset cov) {
        if (stop) return;
        if (i == na) {
            if (used == 0) return;
            if (opts.exact_total && used != opts.total) return;
            if (opts.require_cover) {
                Bitset missing = cover.minus(cov);
                if (missing.any()) return;
            }
            MultiFamily mf;
            std::vector<int> final_mult = mult;
            if (opts.pad_to_total && used < opts.total && pad_elem >= 0)
                final_mult[size_t(pad_elem)] += opts.total - used;
            MultiKey key;
            for (int k = 0; k < na; ++k)
                if (final_mult[size_t(k)] > 0)
                    key.items.push_back({active[size_t(k)], final_mult[size_t(k)]});
            if (opts.pad_to_total && !seen.insert(key).second) return;
            for (auto [idx, m] : key.items)
                mf.elems.push_back({family.elems[size_t(idx)], m});
            if (!emit(mf)) stop = true;
            return;
        }
        // Prune: remaining elements cannot complete the cover.
        if (opts.require_cover) {
            Bitset reach = cov | suffix_cover[size_t(i)];
            if (!cover.is_subset_of(reach)) return;
        }
        const Bitset& s = family.elems[size_t(active[size_t(i)])];
        int cap = opts.total - used;
        if (opts.cap_singletons && s.count() == 1) cap = std::min(cap, 1);
        for (int m = 0; m <= cap && !stop; ++m) {
            mult[size_t(i)] = m;
            recurse(i + 1, used + m, m > 0 ? (cov | s) : cov);
        }
        mult[size_t(i)] = 0;
    };
    recurse(0, 0, Bitset(universe));
}

std::vector<MultiFamily> multisets(const SetFamily& family, const Bitset& cover,
                                   const MultisetOptions& opts) {
    std::vector<MultiFamily> out;
    for_each_multiset(family, cover, opts, [&](const MultiFamily& mf) {
        out.push_back(mf);
        return true;
    });
    return out;
}

SupportSet support_set(const std::vector<std::vector<double>>& rows,
                       const std::vector<double>& px) {
    SupportSet out;
    if (rows.empty()) return out;
    const int nx = int(rows.size());
    const int nv = int(rows[0].size());
    for (int v = 0; v < nv; ++v) {
        Bitset s(nx);
        for (int x = 0; x < nx; ++x)
            if (px[size_t(x)] > 0.0 && rows[size_t(x)][size_t(v)] > 0.0) s.set(x);
        if (s.any()) out.entries.push_back({v, s});
        else out.dropped.push_back(v);
    }
    return out;
}

} // namespace fncomp
