#include "fncomp/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fncomp/parallel.hpp"
#include "fncomp/rng.hpp"

namespace fncomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double triple_support(const RegionTriple& t, double lambda) {
    double corner_lo = std::max(t.a, t.s - t.b) + lambda * t.b;
    double corner_hi = t.a + lambda * std::max(t.b, t.s - t.a);
    // Both corners are feasible for the triple; the support is the cheaper one
    // (they coincide in cost exactly at lambda = 1).
    return std::min(corner_lo, corner_hi);
}

std::pair<double, double> triple_corner(const RegionTriple& t, double lambda) {
    // Support-achieving corner: R_Y is the cheap coordinate for lambda < 1.
    if (lambda <= 1.0) return {t.a, std::max(t.b, t.s - t.a)};
    return {std::max(t.a, t.s - t.b), t.b};
}

} // namespace

double RateRegion::support(double lambda) const {
    double best = kInf;
    for (const RegionTriple& t : triples)
        best = std::min(best, triple_support(t, lambda));
    return best;
}

double RateRegion::min_rx() const {
    double best = kInf;
    for (const RegionTriple& t : triples) best = std::min(best, t.a);
    return best;
}

double RateRegion::min_ry() const {
    double best = kInf;
    for (const RegionTriple& t : triples) best = std::min(best, t.b);
    return best;
}

std::vector<std::pair<double, double>> RateRegion::boundary(
    const std::vector<double>& lambdas) const {
    std::vector<std::pair<double, double>> pts;
    for (double lam : lambdas) {
        double best = kInf;
        const RegionTriple* arg = nullptr;
        for (const RegionTriple& t : triples) {
            double v = triple_support(t, lam);
            if (v < best) { best = v; arg = &t; }
        }
        if (arg) pts.push_back(triple_corner(*arg, lam));
    }
    std::sort(pts.begin(), pts.end());
    // Keep the undominated staircase: R_Y strictly decreasing in R_X.
    std::vector<std::pair<double, double>> out;
    double best_y = kInf;
    for (const auto& p : pts) {
        if (p.second < best_y - 1e-12) {
            out.push_back(p);
            best_y = p.second;
        }
    }
    return out;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    const int n = 64;
    for (int i = 0; i < n; ++i) {
        double t = double(i) / double(n - 1);
        grid.push_back(std::exp2(-5.0 + 10.0 * t)); // [1/32, 32] log-spaced
    }
    grid.push_back(1.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

namespace {

Bitset support_mask(const ProblemSpec& spec, Role role) {
    Pmf marg = spec.pmf.marginal(role_bit(role));
    Bitset out(spec.alphabet_size(role));
    for (int i = 0; i < spec.alphabet_size(role); ++i)
        if (marg.flat(size_t(i)) > 0.0) out.set(i);
    return out;
}

// Covering sub-families (distinct elements, multiplicity 1) of `family`.
std::vector<MultiFamily> covering_subfamilies(const SetFamily& family,
                                              const Bitset& cover,
                                              long max_candidates) {
    std::vector<MultiFamily> out;
    const int n = int(family.elems.size());
    std::vector<int> chosen;
    bool exceeded = false;
    std::function<void(int, Bitset)> rec = [&](int i, Bitset cov) {
        if (exceeded) return;
        if (i == n) {
            if (!chosen.empty() && cover.is_subset_of(cov)) {
                if (long(out.size()) >= max_candidates) { exceeded = true; return; }
                MultiFamily mf;
                for (int k : chosen) mf.elems.push_back({family.elems[size_t(k)], 1});
                out.push_back(std::move(mf));
            }
            return;
        }
        rec(i + 1, cov);
        chosen.push_back(i);
        rec(i + 1, cov | family.elems[size_t(i)]);
        chosen.pop_back();
    };
    rec(0, Bitset(cover.universe()));
    if (exceeded) fail(ErrorKind::Budget, "candidate family budget exceeded");
    return out;
}

std::vector<MultiFamily> v_side_candidates(const ProblemSpec& spec,
                                           const CharGraph& gx,
                                           const RegionOptions& opts) {
    Bitset cover = support_mask(spec, Role::X);
    switch (opts.mode.mode) {
        case FamilyMode::Maximal:
            return covering_subfamilies(maximal_independent_sets(gx), cover,
                                        opts.max_candidates);
        case FamilyMode::All:
            return covering_subfamilies(independent_sets(gx), cover,
                                        opts.max_candidates);
        case FamilyMode::Multiset: {
            // Mask semantics make a zero-weight padding element change the
            // induced G_{Y|V,Z}, so V-side candidates stay unpadded and every
            // total <= K is its own candidate.
            MultisetOptions mopts;
            mopts.total = opts.kv > 0 ? opts.kv
                        : opts.mode.k > 0 ? opts.mode.k
                                          : spec.nx() + 1;
            std::vector<MultiFamily> out;
            bool exceeded = false;
            for_each_multiset(independent_sets(gx), cover, mopts,
                              [&](const MultiFamily& mf) {
                                  if (long(out.size()) >= opts.max_candidates) {
                                      exceeded = true;
                                      return false;
                                  }
                                  out.push_back(mf);
                                  return true;
                              });
            if (exceeded) fail(ErrorKind::Budget, "V-candidate budget exceeded");
            return out;
        }
    }
    return {};
}

std::vector<MultiFamily> w_side_candidates(const ProblemSpec& spec,
                                           const CharGraph& gw,
                                           const RegionOptions& opts) {
    Bitset cover = support_mask(spec, Role::Y);
    if (opts.mode.mode == FamilyMode::Maximal || opts.mode.mode == FamilyMode::All) {
        // W is the terminal side: zero-mass values embed any sub-family
        // exactly, so the whole family is the one candidate.
        SetFamily fam = opts.mode.mode == FamilyMode::Maximal
                            ? maximal_independent_sets(gw)
                            : independent_sets(gw);
        MultiFamily mf;
        for (const Bitset& s : fam.elems) mf.elems.push_back({s, 1});
        return {mf};
    }
    MultisetOptions mopts;
    mopts.total = opts.kw > 0 ? opts.kw
                : opts.mode.k > 0 ? opts.mode.k
                                  : spec.ny() + 1;
    mopts.pad_to_total = true;
    std::vector<MultiFamily> out;
    bool exceeded = false;
    for_each_multiset(independent_sets(gw), cover, mopts,
                      [&](const MultiFamily& mf) {
                          if (long(out.size()) >= opts.max_candidates) {
                              exceeded = true;
                              return false;
                          }
                          out.push_back(mf);
                          return true;
                      });
    if (exceeded) fail(ErrorKind::Budget, "W-candidate budget exceeded");
    return out;
}

struct PairCandidate {
    MultiFamily fam_v, fam_w;
    std::string label;
};

RateRegion sweep_candidates(const ProblemSpec& spec,
                            const std::vector<PairCandidate>& candidates,
                            const RegionOptions& opts, std::string name,
                            std::string kind) {
    std::vector<double> lambdas = opts.lambdas.empty() ? default_lambda_grid()
                                                       : opts.lambdas;
    struct Task {
        const PairCandidate* cand;
        double lambda;
    };
    std::vector<Task> tasks;
    for (const auto& c : candidates)
        for (double lam : lambdas) tasks.push_back({&c, lam});

    std::vector<RegionTriple> results(tasks.size());
    parallel_for(long(tasks.size()), [&](long i) {
        const Task& task = tasks[size_t(i)];
        SolverOptions solver = opts.solver;
        solver.seed = mix_seed(opts.solver.seed, uint64_t(i));
        PairSolveReport rep =
            solve_pair_scalarized(spec, task.cand->fam_v.expand(),
                                  task.cand->fam_w.expand(), task.lambda, solver);
        results[size_t(i)] = {rep.triple.a,       rep.triple.b,
                              rep.triple.s,       task.cand->label,
                              task.lambda,        rep.chanV.rows,
                              rep.chanW.rows};
    });

    RateRegion region;
    region.name = std::move(name);
    region.kind = std::move(kind);
    region.triples = std::move(results);
    return region;
}

} // namespace

RateRegion inner_bound_region(const ProblemSpec& spec, const RegionOptions& opts) {
    CharGraph gx = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z),
                                    opts.vertex_cap);
    std::vector<MultiFamily> v_cands = v_side_candidates(spec, gx, opts);

    std::vector<PairCandidate> pairs;
    for (const MultiFamily& fv : v_cands) {
        CharGraph gw = build_generalized_graph(spec, Role::X, fv.expand(), nullptr,
                                               opts.vertex_cap);
        for (const MultiFamily& fw : w_side_candidates(spec, gw, opts)) {
            if (long(pairs.size()) >= opts.max_candidates)
                fail(ErrorKind::Budget, "candidate pair budget exceeded");
            PairCandidate pc;
            pc.fam_v = fv;
            pc.fam_w = fw;
            pc.label = "V=" + fv.label(spec.alphabet_X) +
                       ";W=" + fw.label(spec.alphabet_Y);
            pairs.push_back(std::move(pc));
        }
    }
    return sweep_candidates(spec, pairs, opts,
                            "inner(" + family_choice_name(opts.mode) + ")",
                            "inner bound");
}

RateRegion outer_bound_region(const ProblemSpec& spec, const RegionOptions& opts) {
    FamilyChoice maximal{FamilyMode::Maximal, 0};
    SolveReport rx = conditional_graph_entropy(spec, Role::X,
                                               roles(Role::Y, Role::Z), maximal,
                                               opts.solver, opts.vertex_cap);
    SolveReport ry = conditional_graph_entropy(spec, Role::Y,
                                               roles(Role::X, Role::Z), maximal,
                                               opts.solver, opts.vertex_cap);
    CharGraph gj = build_joint_char_graph(spec, opts.vertex_cap);
    std::vector<std::vector<double>> p_tc(
        size_t(spec.nx()) * spec.ny(),
        std::vector<double>(size_t(spec.nz()), 0.0));
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z)
                p_tc[size_t(x) * spec.ny() + y][size_t(z)] = spec.p(x, y, z);
    SolveReport rs = graph_entropy_families(gj, p_tc, maximal, opts.solver);

    RateRegion region;
    region.name = "outer";
    region.kind = "outer bound";
    region.triples.push_back(
        {rx.value, ry.value, rs.value,
         "H_G(X|Y,Z), H_G(Y|X,Z), H_G(X,Y|Z) [maximal families]", 0.0});
    return region;
}

RateRegion independent_sources_region(const ProblemSpec& spec,
                                      const RegionOptions& opts) {
    if (!check_conditional_independence(spec))
        fail(ErrorKind::Hypothesis, "X and Y are not independent given Z");
    FamilyChoice maximal{FamilyMode::Maximal, 0};
    SolveReport rx = conditional_graph_entropy(spec, Role::X,
                                               roles(Role::Y, Role::Z), maximal,
                                               opts.solver, opts.vertex_cap);
    SolveReport ry = conditional_graph_entropy(spec, Role::Y,
                                               roles(Role::X, Role::Z), maximal,
                                               opts.solver, opts.vertex_cap);
    RateRegion region;
    region.name = "independent-sources";
    region.kind = "rate region";
    // No sum constraint: the rectangle corner makes s inert.
    region.triples.push_back({rx.value, ry.value, rx.value + ry.value,
                              "rectangle H_G(X|Y,Z) x H_G(Y|X,Z)", 0.0});
    return region;
}

RateRegion partially_invertible_region(const ProblemSpec& spec, Role wrt,
                                       const RegionOptions& opts) {
    if (!check_partially_invertible(spec, wrt))
        fail(ErrorKind::Hypothesis,
             "f is not partially invertible with respect to " + role_name(wrt));
    if (wrt == Role::Y) {
        RateRegion mirrored =
            partially_invertible_region(swap_sources(spec), Role::X, opts);
        RateRegion region;
        region.name = "partially-invertible(Y)";
        region.kind = mirrored.kind;
        for (RegionTriple t : mirrored.triples) {
            std::swap(t.a, t.b);
            region.triples.push_back(t);
        }
        return region;
    }

    // V = X: singleton masks force the identity channel, and the induced
    // generalized graph is exactly G_{Y|X,Z}.
    std::vector<Bitset> singletons;
    for (int x = 0; x < spec.nx(); ++x) {
        Bitset s(spec.nx());
        s.set(x);
        singletons.push_back(s);
    }
    MultiFamily fv;
    for (const Bitset& s : singletons) fv.elems.push_back({s, 1});

    CharGraph gw = build_generalized_graph(spec, Role::X, singletons, nullptr,
                                           opts.vertex_cap);
    RegionOptions wopts = opts;
    wopts.mode = {FamilyMode::Multiset, opts.kw > 0 ? opts.kw : spec.ny() + 1};
    std::vector<PairCandidate> pairs;
    for (const MultiFamily& fw : w_side_candidates(spec, gw, wopts)) {
        PairCandidate pc;
        pc.fam_v = fv;
        pc.fam_w = fw;
        pc.label = "V=X;W=" + fw.label(spec.alphabet_Y);
        pairs.push_back(std::move(pc));
    }
    return sweep_candidates(spec, pairs, opts, "partially-invertible(X)",
                            "rate region");
}

RateRegion slepian_wolf_region(const ProblemSpec& spec) {
    double a = conditional_entropy(spec.pmf, roles(Role::X), roles(Role::Y, Role::Z));
    double b = conditional_entropy(spec.pmf, roles(Role::Y), roles(Role::X, Role::Z));
    double s = conditional_entropy(spec.pmf, roles(Role::X, Role::Y), roles(Role::Z));
    RateRegion region;
    region.name = "slepian-wolf";
    region.kind = "rate region (reference)";
    region.triples.push_back({a, b, s, "H(X|Y,Z), H(Y|X,Z), H(X,Y|Z)", 0.0});
    return region;
}

RateRegion korner_marton_region(const ProblemSpec& spec) {
    if (spec.nx() != 2 || spec.ny() != 2 || spec.nz() != 1)
        fail(ErrorKind::Hypothesis,
             "Korner-Marton needs binary sources and constant Z");
    // f must be the mod-2 sum up to output relabeling.
    if (spec.f(0, 0, 0) != spec.f(1, 1, 0) || spec.f(0, 1, 0) != spec.f(1, 0, 0) ||
        spec.f(0, 0, 0) == spec.f(0, 1, 0))
        fail(ErrorKind::Hypothesis, "Korner-Marton needs f = mod-2 sum");
    if (std::abs(spec.p(0, 0, 0) - spec.p(1, 1, 0)) > 1e-12 ||
        std::abs(spec.p(0, 1, 0) - spec.p(1, 0, 0)) > 1e-12)
        fail(ErrorKind::Hypothesis, "Korner-Marton needs a symmetric pmf");

    double a = conditional_entropy(spec.pmf, roles(Role::X), roles(Role::Y, Role::Z));
    double b = conditional_entropy(spec.pmf, roles(Role::Y), roles(Role::X, Role::Z));
    RateRegion region;
    region.name = "korner-marton";
    region.kind = "rate region (reference)";
    region.triples.push_back({a, b, a + b, "H(X|Y), H(Y|X); no sum constraint", 0.0});
    return region;
}

CompareReport region_compare(const RateRegion& a, const RateRegion& b,
                             int directions, double tol) {
    CompareReport rep;
    rep.tol = tol;
    if (a.empty() || b.empty())
        fail(ErrorKind::Hypothesis, "cannot compare an empty region");

    std::vector<double> lambdas;
    int n = directions > 1 ? directions : 64;
    for (int i = 0; i < n; ++i) {
        double t = double(i) / double(n - 1);
        lambdas.push_back(std::exp2(-5.0 + 10.0 * t));
    }
    lambdas.push_back(1.0);

    rep.min_diff = kInf;
    rep.max_diff = -kInf;
    auto consider = [&](double diff, double witness) {
        if (diff < rep.min_diff) { rep.min_diff = diff; rep.witness_min = witness; }
        if (diff > rep.max_diff) { rep.max_diff = diff; rep.witness_max = witness; }
    };
    for (double lam : lambdas) consider(a.support(lam) - b.support(lam), lam);
    consider(a.min_rx() - b.min_rx(), 0.0);
    consider(a.min_ry() - b.min_ry(), kInf);

    rep.a_subset_b = rep.min_diff >= -tol;
    rep.b_subset_a = rep.max_diff <= tol;
    return rep;
}

OrderEquivalenceReport check_condition_orders(const ProblemSpec& spec, int kv,
                                              int kw, long max_candidates) {
    OrderEquivalenceReport rep;
    if (kv <= 0) kv = spec.nx() + 1;
    if (kw <= 0) kw = spec.ny() + 1;

    CharGraph gx = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    CharGraph gy = build_char_graph(spec, Role::Y, roles(Role::X, Role::Z));
    SetFamily gamma_x = independent_sets(gx);
    SetFamily gamma_y = independent_sets(gy);
    Bitset cover_x = support_mask(spec, Role::X);
    Bitset cover_y = support_mask(spec, Role::Y);

    MultisetOptions vopts, wopts;
    vopts.total = kv;
    wopts.total = kw;

    long budget = max_candidates;
    // V-first: V in M(Gamma(G_{X|Y,Z})), W in M(Gamma(G_{Y|V,Z})); re-validate
    // as W in M(Gamma(G_{Y|X,Z})), V in M(Gamma(G_{X|W,Z})).
    for_each_multiset(gamma_x, cover_x, vopts, [&](const MultiFamily& fv) {
        auto masks_v = fv.expand();
        CharGraph gw = build_generalized_graph(spec, Role::X, masks_v);
        SetFamily gamma_w = independent_sets(gw);
        bool keep_going = true;
        for_each_multiset(gamma_w, cover_y, wopts, [&](const MultiFamily& fw) {
            if (--budget < 0) { keep_going = false; return false; }
            rep.candidates_v_first++;
            auto masks_w = fw.expand();
            bool ok = true;
            for (const Bitset& m : masks_w)
                if (!gy.is_independent(m)) ok = false;
            if (ok) {
                CharGraph gv2 = build_generalized_graph(spec, Role::Y, masks_w);
                for (const Bitset& m : masks_v)
                    if (!gv2.is_independent(m)) ok = false;
            }
            if (ok) rep.agreed++;
            else rep.all_agree = false;
            return true;
        });
        return keep_going;
    });
    // W-first direction.
    for_each_multiset(gamma_y, cover_y, wopts, [&](const MultiFamily& fw) {
        auto masks_w = fw.expand();
        CharGraph gv = build_generalized_graph(spec, Role::Y, masks_w);
        SetFamily gamma_v = independent_sets(gv);
        bool keep_going = true;
        for_each_multiset(gamma_v, cover_x, vopts, [&](const MultiFamily& fv) {
            if (--budget < 0) { keep_going = false; return false; }
            rep.candidates_w_first++;
            auto masks_v = fv.expand();
            bool ok = true;
            for (const Bitset& m : masks_v)
                if (!gx.is_independent(m)) ok = false;
            if (ok) {
                CharGraph gw2 = build_generalized_graph(spec, Role::X, masks_v);
                for (const Bitset& m : masks_w)
                    if (!gw2.is_independent(m)) ok = false;
            }
            if (ok) rep.agreed++;
            else rep.all_agree = false;
            return true;
        });
        return keep_going;
    });
    if (budget < 0)
        fail(ErrorKind::Budget, "condition-order candidate budget exceeded");
    return rep;
}

} // namespace fncomp
