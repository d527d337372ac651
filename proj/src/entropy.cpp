#include "fncomp/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fncomp/rng.hpp"

namespace fncomp {

namespace {

constexpr double kTinyProb = 1e-300;


inline double binary_entropy(double v) {
    if (v <= 0.0 || v >= 1.0) return 0.0;
    return -v * std::log2(v) - (1.0 - v) * std::log2(1.0 - v);
}

using Rows = std::vector<std::vector<double>>;

std::vector<std::vector<int>> mask_slots(const std::vector<Bitset>& masks, int nt) {
    std::vector<std::vector<int>> slots(static_cast<size_t>(nt));
    for (int v = 0; v < int(masks.size()); ++v)
        for (int t : masks[size_t(v)].bits()) slots[size_t(t)].push_back(v);
    return slots;
}

} // namespace

// ---------------------------------------------------------------- Channel

void Channel::validate(const std::vector<double>& pt) const {
    const int nt = int(rows.size());
    if (int(pt.size()) != nt)
        fail(ErrorKind::MembershipViolation, "channel/marginal size mismatch");
    Bitset covered = masks.empty() ? Bitset(nt) : Bitset(masks[0].universe());
    for (const Bitset& m : masks) {
        if (m.universe() != nt)
            fail(ErrorKind::MembershipViolation, "mask over wrong alphabet");
        covered |= m;
    }
    for (int t = 0; t < nt; ++t) {
        if (int(rows[size_t(t)].size()) != values())
            fail(ErrorKind::MembershipViolation, "ragged channel rows");
        double sum = 0.0;
        for (int v = 0; v < values(); ++v) {
            double q = rows[size_t(t)][size_t(v)];
            if (q < 0.0)
                fail(ErrorKind::MembershipViolation, "negative channel entry");
            if (q != 0.0 && !masks[size_t(v)].test(t))
                fail(ErrorKind::MembershipViolation, "mass off the membership mask");
            sum += q;
        }
        if (pt[size_t(t)] > 0.0) {
            if (std::abs(sum - 1.0) > 1e-12)
                fail(ErrorKind::MembershipViolation, "channel row sum != 1");
            if (!covered.test(t))
                fail(ErrorKind::MembershipViolation, "uncovered source symbol");
        }
    }
}

Channel uniform_channel(const std::vector<Bitset>& masks, int nt) {
    Channel ch;
    ch.masks = masks;
    ch.rows.assign(size_t(nt), std::vector<double>(masks.size(), 0.0));
    auto slots = mask_slots(masks, nt);
    for (int t = 0; t < nt; ++t)
        for (int v : slots[size_t(t)])
            ch.rows[size_t(t)][size_t(v)] = 1.0 / double(slots[size_t(t)].size());
    return ch;
}

Channel dirichlet_channel(const std::vector<Bitset>& masks, int nt,
                          uint64_t seed, double floor_eps) {
    Channel ch;
    ch.masks = masks;
    ch.rows.assign(size_t(nt), std::vector<double>(masks.size(), 0.0));
    auto slots = mask_slots(masks, nt);
    Rng rng(seed);
    for (int t = 0; t < nt; ++t) {
        double sum = 0.0;
        for (int v : slots[size_t(t)]) {
            double e = std::max(-std::log(rng.uniform()), floor_eps);
            ch.rows[size_t(t)][size_t(v)] = e;
            sum += e;
        }
        for (int v : slots[size_t(t)]) ch.rows[size_t(t)][size_t(v)] /= sum;
    }
    return ch;
}

FamilyChoice parse_family_choice(const std::string& text) {
    if (text == "maximal") return {FamilyMode::Maximal, 0};
    if (text == "all") return {FamilyMode::All, 0};
    if (text == "multiset") return {FamilyMode::Multiset, 0};
    if (text.rfind("multiset:", 0) == 0)
        return {FamilyMode::Multiset, std::stoi(text.substr(9))};
    fail(ErrorKind::Role, "unknown family mode '" + text + "'");
}

std::string family_choice_name(const FamilyChoice& mode) {
    switch (mode.mode) {
        case FamilyMode::Maximal: return "maximal";
        case FamilyMode::All: return "all";
        case FamilyMode::Multiset:
            return mode.k > 0 ? "multiset:" + std::to_string(mode.k) : "multiset";
    }
    return "?";
}

// ---------------------------------------------------------------- single solver
//
// min I(V;T|C) over rows q(.|t) on masked simplices; convex in q, solved by
// exponentiated gradient with backtracking line search.

namespace {

struct SingleWork {
    const Rows& p_tc;
    int nt, nc, nv;
    std::vector<std::vector<int>> slots; // allowed v per t
    std::vector<double> pc;

    // scratch
    mutable std::vector<double> pvc; // [v*nc + c]

    SingleWork(const Rows& p, const std::vector<Bitset>& masks)
        : p_tc(p), nt(int(p.size())), nc(nt ? int(p[0].size()) : 0),
          nv(int(masks.size())), slots(mask_slots(masks, nt)),
          pc(size_t(nc), 0.0), pvc(size_t(nv) * size_t(nc), 0.0) {
        for (int t = 0; t < nt; ++t)
            for (int c = 0; c < nc; ++c) pc[size_t(c)] += p_tc[size_t(t)][size_t(c)];
    }

    double objective(const Rows& q) const {
        std::fill(pvc.begin(), pvc.end(), 0.0);
        for (int t = 0; t < nt; ++t)
            for (int c = 0; c < nc; ++c) {
                double p = p_tc[size_t(t)][size_t(c)];
                if (p <= 0.0) continue;
                for (int v : slots[size_t(t)])
                    pvc[size_t(v) * size_t(nc) + size_t(c)] += p * q[size_t(t)][size_t(v)];
            }
        double total = 0.0;
        for (int t = 0; t < nt; ++t)
            for (int c = 0; c < nc; ++c) {
                double p = p_tc[size_t(t)][size_t(c)];
                if (p <= 0.0) continue;
                for (int v : slots[size_t(t)]) {
                    double qv = q[size_t(t)][size_t(v)];
                    if (qv <= 0.0) continue;
                    double denom = pvc[size_t(v) * size_t(nc) + size_t(c)];
                    total += p * qv * std::log2(qv * pc[size_t(c)] / denom);
                }
            }
        return std::max(total, 0.0);
    }

    // Assumes objective() was just called (pvc is current).
    void gradient(const Rows& q, Rows& g) const {
        for (int t = 0; t < nt; ++t) {
            std::fill(g[size_t(t)].begin(), g[size_t(t)].end(), 0.0);
            for (int c = 0; c < nc; ++c) {
                double p = p_tc[size_t(t)][size_t(c)];
                if (p <= 0.0) continue;
                for (int v : slots[size_t(t)]) {
                    double qv = std::max(q[size_t(t)][size_t(v)], kTinyProb);
                    double denom = pvc[size_t(v) * size_t(nc) + size_t(c)];
                    if (denom <= 0.0) continue;
                    g[size_t(t)][size_t(v)] += p * std::log2(qv * pc[size_t(c)] / denom);
                }
            }
        }
    }
};

// One exponentiated-gradient trial step; the exponent is shifted per row so it
// never overflows (normalization cancels the shift).
void eg_step(const Rows& q, const Rows& g,
             const std::vector<std::vector<int>>& slots, double eta, Rows& out) {
    const int nt = int(q.size());
    for (int t = 0; t < nt; ++t) {
        const auto& sl = slots[size_t(t)];
        if (sl.size() <= 1) {
            out[size_t(t)] = q[size_t(t)];
            continue;
        }
        double gmin = std::numeric_limits<double>::infinity();
        for (int v : sl) gmin = std::min(gmin, g[size_t(t)][size_t(v)]);
        double sum = 0.0;
        std::fill(out[size_t(t)].begin(), out[size_t(t)].end(), 0.0);
        for (int v : sl) {
            double w = q[size_t(t)][size_t(v)] *
                       std::exp(-eta * (g[size_t(t)][size_t(v)] - gmin));
            w = std::max(w, kTinyProb);
            out[size_t(t)][size_t(v)] = w;
            sum += w;
        }
        for (int v : sl) out[size_t(t)][size_t(v)] /= sum;
    }
}

struct DescentResult {
    double value;
    long iterations;
    bool converged;
};

// Generic backtracking EG descent over one block of rows.
template <typename Objective, typename Gradient>
DescentResult eg_descent(Rows& q, const std::vector<std::vector<int>>& slots,
                         const SolverOptions& opts, Objective&& objective,
                         Gradient&& gradient) {
    Rows g = q, trial = q;
    double f = objective(q);
    double eta = 0.5;
    int flat_sweeps = 0;
    long it = 0;
    for (; it < opts.max_iters; ++it) {
        gradient(q, g);
        bool accepted = false;
        while (eta > 1e-14) {
            eg_step(q, g, slots, eta, trial);
            double ft = objective(trial);
            if (ft <= f) {
                double rel = std::abs(f - ft) / std::max(1.0, std::abs(f));
                q.swap(trial);
                f = ft;
                accepted = true;
                flat_sweeps = rel < opts.rel_tol ? flat_sweeps + 1 : 0;
                eta = std::min(eta * 1.3, 8.0);
                break;
            }
            eta *= 0.5;
        }
        if (!accepted || flat_sweeps >= 2) {
            objective(q); // leave scratch marginals at the final point
            return {f, it + 1, true};
        }
    }
    objective(q);
    return {f, it, false};
}

} // namespace

SolveReport solve_single_family(const Rows& p_tc,
                                const std::vector<Bitset>& masks,
                                const SolverOptions& opts) {
    const int nt = int(p_tc.size());
    SingleWork work(p_tc, masks);
    for (int t = 0; t < nt; ++t) {
        double pt = 0.0;
        for (double p : p_tc[size_t(t)]) pt += p;
        if (pt > 0.0 && work.slots[size_t(t)].empty())
            fail(ErrorKind::MembershipViolation,
                 "family does not cover supported symbol " + std::to_string(t));
    }

    SolveReport report;
    report.value = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    const int restarts = std::max(opts.restarts, 1);
    for (int r = 0; r < restarts; ++r) {
        Channel init = r == 0 ? uniform_channel(masks, nt)
                              : dirichlet_channel(masks, nt,
                                                  mix_seed(opts.seed, uint64_t(r)),
                                                  opts.init_floor);
        Rows q = init.rows;
        DescentResult res = eg_descent(
            q, work.slots, opts,
            [&](const Rows& rows) { return work.objective(rows); },
            [&](const Rows& rows, Rows& g) { work.gradient(rows, g); });
        report.iterations += res.iterations;
        report.converged = report.converged && res.converged;
        worst = std::max(worst, res.value);
        if (res.value < report.value) {
            report.value = res.value;
            report.argmin.masks = masks;
            report.argmin.rows = std::move(q);
        }
    }
    report.restarts_used = restarts;
    report.restart_spread = worst - report.value;
    return report;
}

SolveReport graph_entropy_families(const CharGraph& g, const Rows& p_tc,
                                   FamilyChoice mode, const SolverOptions& opts) {
    const int nt = g.n();
    Bitset cover(nt);
    for (int t = 0; t < nt; ++t) {
        double pt = 0.0;
        for (double p : p_tc[size_t(t)]) pt += p;
        if (pt > 0.0) cover.set(t);
    }

    std::vector<MultiFamily> families;
    if (mode.mode == FamilyMode::Maximal || mode.mode == FamilyMode::All) {
        SetFamily fam = mode.mode == FamilyMode::Maximal
                            ? maximal_independent_sets(g)
                            : independent_sets(g);
        MultiFamily mf;
        for (const Bitset& s : fam.elems) mf.elems.push_back({s, 1});
        families.push_back(std::move(mf));
    } else {
        int k = mode.k > 0 ? mode.k : nt + 1;
        MultisetOptions mopts;
        mopts.total = k;
        mopts.pad_to_total = true;
        families = multisets(independent_sets(g), cover, mopts);
    }

    SolveReport best;
    best.value = std::numeric_limits<double>::infinity();
    for (const MultiFamily& fam : families) {
        SolveReport r = solve_single_family(p_tc, fam.expand(), opts);
        if (r.value < best.value) {
            double iters = double(best.iterations + r.iterations);
            bool conv = best.families_tried == 0 ? r.converged
                                                 : (best.converged && r.converged);
            int tried = best.families_tried;
            best = r;
            best.family = fam;
            best.iterations = long(iters);
            best.converged = conv;
            best.families_tried = tried;
        } else {
            best.iterations += r.iterations;
            best.converged = best.converged && r.converged;
        }
        best.families_tried++;
    }
    if (families.empty())
        fail(ErrorKind::MembershipViolation, "no admissible family covers the alphabet");
    return best;
}

Rows target_context_matrix(const ProblemSpec& spec, Role target, RoleSet given) {
    std::vector<Role> given_roles;
    for (Role r : {Role::X, Role::Y, Role::Z})
        if (role_in(given, r)) given_roles.push_back(r);
    int nc = 1;
    for (Role r : given_roles) nc *= spec.alphabet_size(r);
    const int nt = spec.alphabet_size(target);
    Rows out(size_t(nt), std::vector<double>(size_t(nc), 0.0));
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z) {
                double p = spec.p(x, y, z);
                if (p <= 0.0) continue;
                int t = target == Role::X ? x : target == Role::Y ? y : z;
                int c = 0;
                for (Role r : given_roles) {
                    int coord = r == Role::X ? x : r == Role::Y ? y : z;
                    c = c * spec.alphabet_size(r) + coord;
                }
                out[size_t(t)][size_t(c)] += p;
            }
    return out;
}

SolveReport conditional_graph_entropy(const ProblemSpec& spec, Role target,
                                      RoleSet given, FamilyChoice mode,
                                      const SolverOptions& opts, int vertex_cap) {
    CharGraph g = build_char_graph(spec, target, given, vertex_cap);
    Rows p_tc = target_context_matrix(spec, target, given);
    return graph_entropy_families(g, p_tc, mode, opts);
}

// ---------------------------------------------------------------- pair solver

namespace {

struct Weights {
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

Weights lambda_weights(double lambda) {
    // Support value of the triple region in direction (1, lambda). The triples
    // always satisfy s >= a + b, so the cheaper corner is (a, s-a) when R_Y is
    // the cheap coordinate (lambda <= 1) and (s-b, b) otherwise:
    //   lambda <= 1: a + lambda*(s-a) = lambda*T1 + lambda*T2 + (1-lambda)*T3
    //   lambda >= 1: (s-b) + lambda*b = T1 + lambda*T2
    if (lambda <= 1.0) return {lambda, lambda, 1.0 - lambda};
    return {1.0, lambda, 0.0};
}

struct SupportCell {
    int x, y, z;
    double p;
};

struct PairWork {
    const ProblemSpec& spec;
    int nx, ny, nz, nv, nw;
    std::vector<std::vector<int>> slots_v, slots_w;
    std::vector<SupportCell> cells;

    // marginals of p(x,y,z) q(v|x) r(w|y), flat arrays
    std::vector<double> pz, pxz, pyz, pvz, pvxz, pyvz, pvwz, pwz, pxwz, pvxwz,
        pywvz;
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;

    PairWork(const ProblemSpec& s, const std::vector<Bitset>& masksV,
             const std::vector<Bitset>& masksW)
        : spec(s), nx(s.nx()), ny(s.ny()), nz(s.nz()), nv(int(masksV.size())),
          nw(int(masksW.size())), slots_v(mask_slots(masksV, nx)),
          slots_w(mask_slots(masksW, ny)) {
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                for (int z = 0; z < nz; ++z)
                    if (s.p(x, y, z) > 0.0) cells.push_back({x, y, z, s.p(x, y, z)});
        pz.assign(size_t(nz), 0.0);
        pxz.assign(size_t(nx) * nz, 0.0);
        pyz.assign(size_t(ny) * nz, 0.0);
        for (const auto& c : cells) {
            pz[size_t(c.z)] += c.p;
            pxz[size_t(c.x) * nz + c.z] += c.p;
            pyz[size_t(c.y) * nz + c.z] += c.p;
        }
        pvz.assign(size_t(nv) * nz, 0.0);
        pvxz.assign(size_t(nv) * nx * nz, 0.0);
        pyvz.assign(size_t(ny) * nv * nz, 0.0);
        pvwz.assign(size_t(nv) * nw * nz, 0.0);
        pwz.assign(size_t(nw) * nz, 0.0);
        pxwz.assign(size_t(nx) * nw * nz, 0.0);
        pvxwz.assign(size_t(nv) * nx * nw * nz, 0.0);
        pywvz.assign(size_t(ny) * nw * nv * nz, 0.0);
    }

    // Recomputes all channel-dependent marginals and the three information
    // terms; returns the weighted objective.
    double eval(const Rows& qv, const Rows& qw, const Weights& wt) {
        std::fill(pvz.begin(), pvz.end(), 0.0);
        std::fill(pvxz.begin(), pvxz.end(), 0.0);
        std::fill(pyvz.begin(), pyvz.end(), 0.0);
        std::fill(pvwz.begin(), pvwz.end(), 0.0);
        std::fill(pwz.begin(), pwz.end(), 0.0);
        std::fill(pxwz.begin(), pxwz.end(), 0.0);
        std::fill(pvxwz.begin(), pvxwz.end(), 0.0);
        std::fill(pywvz.begin(), pywvz.end(), 0.0);

        for (const auto& c : cells) {
            const auto& sv = slots_v[size_t(c.x)];
            const auto& sw = slots_w[size_t(c.y)];
            for (int v : sv) {
                double pv = c.p * qv[size_t(c.x)][size_t(v)];
                if (pv <= 0.0) continue;
                pvxz[(size_t(v) * nx + c.x) * nz + c.z] += pv;
                pyvz[(size_t(c.y) * nv + v) * nz + c.z] += pv;
                for (int w : sw) {
                    double pvw = pv * qw[size_t(c.y)][size_t(w)];
                    if (pvw <= 0.0) continue;
                    pvxwz[((size_t(v) * nx + c.x) * nw + w) * nz + c.z] += pvw;
                    pywvz[((size_t(c.y) * nw + w) * nv + v) * nz + c.z] += pvw;
                }
            }
            for (int w : sw) {
                double pw = c.p * qw[size_t(c.y)][size_t(w)];
                if (pw > 0.0) pxwz[(size_t(c.x) * nw + w) * nz + c.z] += pw;
            }
        }
        for (int v = 0; v < nv; ++v)
            for (int x = 0; x < nx; ++x)
                for (int z = 0; z < nz; ++z)
                    pvz[size_t(v) * nz + z] += pvxz[(size_t(v) * nx + x) * nz + z];
        for (int x = 0; x < nx; ++x)
            for (int w = 0; w < nw; ++w)
                for (int z = 0; z < nz; ++z)
                    pwz[size_t(w) * nz + z] += pxwz[(size_t(x) * nw + w) * nz + z];
        for (int v = 0; v < nv; ++v)
            for (int x = 0; x < nx; ++x)
                for (int w = 0; w < nw; ++w)
                    for (int z = 0; z < nz; ++z)
                        pvwz[(size_t(v) * nw + w) * nz + z] +=
                            pvxwz[((size_t(v) * nx + x) * nw + w) * nz + z];

        t1 = t2 = t3 = 0.0;
        for (int v = 0; v < nv; ++v)
            for (int x = 0; x < nx; ++x)
                for (int z = 0; z < nz; ++z) {
                    double p = pvxz[(size_t(v) * nx + x) * nz + z];
                    if (p <= 0.0) continue;
                    t1 += p * std::log2(p * pz[size_t(z)] /
                                        (pvz[size_t(v) * nz + z] * pxz[size_t(x) * nz + z]));
                }
        for (int y = 0; y < ny; ++y)
            for (int w = 0; w < nw; ++w)
                for (int v = 0; v < nv; ++v)
                    for (int z = 0; z < nz; ++z) {
                        double p = pywvz[((size_t(y) * nw + w) * nv + v) * nz + z];
                        if (p <= 0.0) continue;
                        t2 += p * std::log2(p * pvz[size_t(v) * nz + z] /
                                            (pyvz[(size_t(y) * nv + v) * nz + z] *
                                             pvwz[(size_t(v) * nw + w) * nz + z]));
                    }
        for (int v = 0; v < nv; ++v)
            for (int x = 0; x < nx; ++x)
                for (int w = 0; w < nw; ++w)
                    for (int z = 0; z < nz; ++z) {
                        double p = pvxwz[((size_t(v) * nx + x) * nw + w) * nz + z];
                        if (p <= 0.0) continue;
                        t3 += p * std::log2(p * pwz[size_t(w) * nz + z] /
                                            (pvwz[(size_t(v) * nw + w) * nz + z] *
                                             pxwz[(size_t(x) * nw + w) * nz + z]));
                    }
        t1 = std::max(t1, 0.0);
        t2 = std::max(t2, 0.0);
        t3 = std::max(t3, 0.0);
        return wt.t1 * t1 + wt.t2 * t2 + wt.t3 * t3;
    }

    // d(term)/dq(v|x) summed with weights; assumes eval() ran at (qv, qw).
    void grad_v(const Rows& qv, const Rows& qw, const Weights& wt, Rows& g) const {
        (void)qv;
        for (int x = 0; x < nx; ++x)
            std::fill(g[size_t(x)].begin(), g[size_t(x)].end(), 0.0);
        // T1: sum_z p(x,z) L1(v,x,z)
        if (wt.t1 != 0.0)
            for (int x = 0; x < nx; ++x)
                for (int v : slots_v[size_t(x)])
                    for (int z = 0; z < nz; ++z) {
                        double pxz_ = pxz[size_t(x) * nz + z];
                        double pvxz_ = pvxz[(size_t(v) * nx + x) * nz + z];
                        if (pxz_ <= 0.0 || pvxz_ <= 0.0) continue;
                        g[size_t(x)][size_t(v)] +=
                            wt.t1 * pxz_ *
                            std::log2(pvxz_ * pz[size_t(z)] /
                                      (pvz[size_t(v) * nz + z] * pxz_));
                    }
        // T2: sum_{y,w,z} p(x,y,z) r(w|y) L2(y,w,v,z)
        // T3: sum_{w,z} p(x,w,z) L3(v,x,w,z)
        if (wt.t2 != 0.0 || wt.t3 != 0.0)
            for (const auto& c : cells)
                for (int w : slots_w[size_t(c.y)]) {
                    double coef = c.p * qw[size_t(c.y)][size_t(w)];
                    if (coef <= 0.0) continue;
                    for (int v : slots_v[size_t(c.x)]) {
                        double add = 0.0;
                        if (wt.t2 != 0.0) {
                            double num = pywvz[((size_t(c.y) * nw + w) * nv + v) * nz + c.z];
                            if (num > 0.0)
                                add += wt.t2 *
                                       std::log2(num * pvz[size_t(v) * nz + c.z] /
                                                 (pyvz[(size_t(c.y) * nv + v) * nz + c.z] *
                                                  pvwz[(size_t(v) * nw + w) * nz + c.z]));
                        }
                        if (wt.t3 != 0.0) {
                            double num = pvxwz[((size_t(v) * nx + c.x) * nw + w) * nz + c.z];
                            if (num > 0.0)
                                add += wt.t3 *
                                       std::log2(num * pwz[size_t(w) * nz + c.z] /
                                                 (pvwz[(size_t(v) * nw + w) * nz + c.z] *
                                                  pxwz[(size_t(c.x) * nw + w) * nz + c.z]));
                        }
                        g[size_t(c.x)][size_t(v)] += coef * add;
                    }
                }
    }

    void grad_w(const Rows& qv, const Rows& qw, const Weights& wt, Rows& g) const {
        (void)qw;
        for (int y = 0; y < ny; ++y)
            std::fill(g[size_t(y)].begin(), g[size_t(y)].end(), 0.0);
        if (wt.t2 == 0.0 && wt.t3 == 0.0) return;
        for (const auto& c : cells)
            for (int v : slots_v[size_t(c.x)]) {
                double coef = c.p * qv[size_t(c.x)][size_t(v)];
                if (coef <= 0.0) continue;
                for (int w : slots_w[size_t(c.y)]) {
                    double add = 0.0;
                    if (wt.t2 != 0.0) {
                        double num = pywvz[((size_t(c.y) * nw + w) * nv + v) * nz + c.z];
                        if (num > 0.0)
                            add += wt.t2 *
                                   std::log2(num * pvz[size_t(v) * nz + c.z] /
                                             (pyvz[(size_t(c.y) * nv + v) * nz + c.z] *
                                              pvwz[(size_t(v) * nw + w) * nz + c.z]));
                    }
                    if (wt.t3 != 0.0) {
                        double num = pvxwz[((size_t(v) * nx + c.x) * nw + w) * nz + c.z];
                        if (num > 0.0)
                            add += wt.t3 *
                                   std::log2(num * pwz[size_t(w) * nz + c.z] /
                                             (pvwz[(size_t(v) * nw + w) * nz + c.z] *
                                              pxwz[(size_t(c.x) * nw + w) * nz + c.z]));
                    }
                    g[size_t(c.y)][size_t(w)] += coef * add;
                }
            }
    }
};

} // namespace

double scalarize(const RateTriple& t, double lambda) {
    double at_a = t.a + lambda * std::max(t.b, t.s - t.a);
    double at_b = std::max(t.a, t.s - t.b) + lambda * t.b;
    return std::min(at_a, at_b);
}

RateTriple rate_triple(const ProblemSpec& spec, const Channel& chanV,
                       const Channel& chanW) {
    Pmf px = spec.pmf.marginal(role_bit(Role::X));
    Pmf py = spec.pmf.marginal(role_bit(Role::Y));
    std::vector<double> pxv(size_t(spec.nx())), pyv(size_t(spec.ny()));
    for (int x = 0; x < spec.nx(); ++x) pxv[size_t(x)] = px.flat(size_t(x));
    for (int y = 0; y < spec.ny(); ++y) pyv[size_t(y)] = py.flat(size_t(y));
    chanV.validate(pxv);
    chanW.validate(pyv);

    // V masks must be an independent-set family of G_{X|Y,Z} (checked inside),
    // and W masks independent sets of the induced generalized graph.
    CharGraph gw = build_generalized_graph(spec, Role::X, chanV.masks);
    for (const Bitset& m : chanW.masks)
        if (!gw.is_independent(m))
            fail(ErrorKind::Mask, "W mask " + m.to_string(spec.alphabet_Y) +
                                      " is not independent in G_{Y|V,Z}");

    Pmf joint = make_joint_vxywz(spec, chanV.rows, chanW.rows);
    RateTriple t;
    t.a = conditional_mutual_information(joint, roles(Role::V), roles(Role::X),
                                         roles(Role::W, Role::Z));
    t.b = conditional_mutual_information(joint, roles(Role::Y), roles(Role::W),
                                         roles(Role::V, Role::Z));
    t.s = conditional_mutual_information(joint, roles(Role::V), roles(Role::X),
                                         roles(Role::Z)) +
          t.b;
    return t;
}

double pair_objective(const ProblemSpec& spec, const std::vector<Bitset>& masksV,
                      const std::vector<Bitset>& masksW, double lambda,
                      const Rows& rows_v, const Rows& rows_w, Rows* grad_v,
                      Rows* grad_w) {
    PairWork work(spec, masksV, masksW);
    const Weights wt = lambda_weights(lambda);
    double f = work.eval(rows_v, rows_w, wt);
    if (grad_v) {
        grad_v->assign(rows_v.size(), std::vector<double>(masksV.size(), 0.0));
        work.grad_v(rows_v, rows_w, wt, *grad_v);
    }
    if (grad_w) {
        grad_w->assign(rows_w.size(), std::vector<double>(masksW.size(), 0.0));
        work.grad_w(rows_v, rows_w, wt, *grad_w);
    }
    return f;
}

PairSolveReport solve_pair_scalarized(const ProblemSpec& spec,
                                      const std::vector<Bitset>& masksV,
                                      const std::vector<Bitset>& masksW,
                                      double lambda, const SolverOptions& opts) {
    PairWork work(spec, masksV, masksW);
    const Weights wt = lambda_weights(lambda);

    PairSolveReport best;
    best.objective = std::numeric_limits<double>::infinity();

    const int restarts = std::max(opts.restarts, 1);
    for (int r = 0; r < restarts; ++r) {
        Rows qv, qw;
        if (r == 0) {
            qv = uniform_channel(masksV, spec.nx()).rows;
            qw = uniform_channel(masksW, spec.ny()).rows;
        } else {
            qv = dirichlet_channel(masksV, spec.nx(),
                                   mix_seed(opts.seed, uint64_t(r), 0), opts.init_floor)
                     .rows;
            qw = dirichlet_channel(masksW, spec.ny(),
                                   mix_seed(opts.seed, uint64_t(r), 1), opts.init_floor)
                     .rows;
        }

        double f = work.eval(qv, qw, wt);
        Rows gv = qv, gw = qw, trial_v = qv, trial_w = qw;
        double eta_v = 0.5, eta_w = 0.5;
        int flat = 0;
        bool converged = false;
        long it = 0;
        for (; it < opts.max_iters; ++it) {
            double f_before = f;
            // V block
            work.grad_v(qv, qw, wt, gv);
            while (eta_v > 1e-14) {
                eg_step(qv, gv, work.slots_v, eta_v, trial_v);
                double ft = work.eval(trial_v, qw, wt);
                if (ft <= f) {
                    qv.swap(trial_v);
                    f = ft;
                    eta_v = std::min(eta_v * 1.3, 8.0);
                    break;
                }
                eta_v *= 0.5;
            }
            work.eval(qv, qw, wt); // refresh marginals at the accepted point
            // W block
            work.grad_w(qv, qw, wt, gw);
            while (eta_w > 1e-14) {
                eg_step(qw, gw, work.slots_w, eta_w, trial_w);
                double ft = work.eval(qv, trial_w, wt);
                if (ft <= f) {
                    qw.swap(trial_w);
                    f = ft;
                    eta_w = std::min(eta_w * 1.3, 8.0);
                    break;
                }
                eta_w *= 0.5;
            }
            work.eval(qv, qw, wt);
            double rel = std::abs(f_before - f) / std::max(1.0, std::abs(f_before));
            flat = rel < opts.rel_tol ? flat + 1 : 0;
            if (flat >= 2) { converged = true; ++it; break; }
        }

        double obj = work.eval(qv, qw, wt);
        best.iterations += it;
        if (obj < best.objective) {
            best.objective = obj;
            best.triple = {work.t3, work.t2, work.t1 + work.t2};
            best.chanV = {masksV, qv};
            best.chanW = {masksW, qw};
            best.converged = converged;
        }
    }
    return best;
}

// ---------------------------------------------------------------- grid oracle

namespace {

// All length-`slots` compositions of `resolution`, as normalized rows.
std::vector<std::vector<double>> row_grid(int slots, int resolution) {
    std::vector<std::vector<double>> out;
    std::vector<int> cur(size_t(slots), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == slots - 1) {
            cur[size_t(i)] = left;
            std::vector<double> row(static_cast<size_t>(slots));
            for (int k = 0; k < slots; ++k)
                row[size_t(k)] = double(cur[size_t(k)]) / double(resolution);
            out.push_back(std::move(row));
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[size_t(i)] = v;
            rec(i + 1, left - v);
        }
    };
    if (slots > 0) rec(0, resolution);
    return out;
}

// Continuity bound for the information terms over the grid: each row is
// within L1 <= slots/resolution of an arbitrary simplex point, and
// |I(P)-I(Q)| <= 2 (tv log2(N-1) + h(tv)) per conditional entropy pair.
double grid_gap_bound(const std::vector<std::vector<int>>& slots, int resolution,
                      int nv, double weight) {
    int worst = 1;
    for (const auto& s : slots) worst = std::max(worst, int(s.size()));
    double tv = std::min(0.5 * double(worst) / double(resolution), 0.5);
    double per_entropy = tv * std::log2(std::max(nv - 1, 2)) + binary_entropy(tv);
    return weight * 2.0 * per_entropy;
}

} // namespace

OracleResult grid_oracle_entropy(const Rows& p_tc,
                                 const std::vector<Bitset>& masks, int resolution,
                                 long max_points) {
    const int nt = int(p_tc.size());
    SingleWork work(p_tc, masks);

    std::vector<std::vector<std::vector<double>>> grids;
    long total = 1;
    for (int t = 0; t < nt; ++t) {
        auto g = row_grid(int(work.slots[size_t(t)].size()), resolution);
        if (g.empty()) fail(ErrorKind::MembershipViolation, "uncovered symbol");
        total *= long(g.size());
        if (total > max_points)
            fail(ErrorKind::Size, "oracle grid exceeds point cap");
        grids.push_back(std::move(g));
    }

    Rows q(size_t(nt), std::vector<double>(masks.size(), 0.0));
    std::vector<size_t> pick(size_t(nt), 0);
    auto apply_row = [&](int t) {
        std::fill(q[size_t(t)].begin(), q[size_t(t)].end(), 0.0);
        const auto& row = grids[size_t(t)][pick[size_t(t)]];
        for (size_t k = 0; k < row.size(); ++k)
            q[size_t(t)][size_t(work.slots[size_t(t)][k])] = row[k];
    };
    for (int t = 0; t < nt; ++t) apply_row(t);

    OracleResult res;
    res.value = std::numeric_limits<double>::infinity();
    res.points = total;
    while (true) {
        res.value = std::min(res.value, work.objective(q));
        int t = 0;
        while (t < nt) {
            if (++pick[size_t(t)] < grids[size_t(t)].size()) {
                apply_row(t);
                break;
            }
            pick[size_t(t)] = 0;
            apply_row(t);
            ++t;
        }
        if (t == nt) break;
    }
    res.gap = grid_gap_bound(work.slots, resolution, int(masks.size()), 2.0);
    return res;
}

OracleResult grid_oracle_scalarized(const ProblemSpec& spec,
                                    const std::vector<Bitset>& masksV,
                                    const std::vector<Bitset>& masksW,
                                    double lambda, int resolution,
                                    long max_points) {
    PairWork work(spec, masksV, masksW);
    const Weights wt = lambda_weights(lambda);

    struct Axis {
        bool is_v;
        int t;
        std::vector<std::vector<double>> grid;
    };
    std::vector<Axis> axes;
    long total = 1;
    for (int x = 0; x < spec.nx(); ++x) {
        axes.push_back({true, x, row_grid(int(work.slots_v[size_t(x)].size()), resolution)});
        total *= long(axes.back().grid.size());
        if (total > max_points) fail(ErrorKind::Size, "oracle grid exceeds point cap");
    }
    for (int y = 0; y < spec.ny(); ++y) {
        axes.push_back({false, y, row_grid(int(work.slots_w[size_t(y)].size()), resolution)});
        total *= long(axes.back().grid.size());
        if (total > max_points) fail(ErrorKind::Size, "oracle grid exceeds point cap");
    }

    Rows qv(size_t(spec.nx()), std::vector<double>(masksV.size(), 0.0));
    Rows qw(size_t(spec.ny()), std::vector<double>(masksW.size(), 0.0));
    std::vector<size_t> pick(axes.size(), 0);
    auto apply = [&](size_t i) {
        const Axis& ax = axes[i];
        const auto& row = ax.grid[pick[i]];
        auto& rows = ax.is_v ? qv : qw;
        const auto& slots = ax.is_v ? work.slots_v[size_t(ax.t)] : work.slots_w[size_t(ax.t)];
        std::fill(rows[size_t(ax.t)].begin(), rows[size_t(ax.t)].end(), 0.0);
        for (size_t k = 0; k < row.size(); ++k)
            rows[size_t(ax.t)][size_t(slots[k])] = row[k];
    };
    for (size_t i = 0; i < axes.size(); ++i) apply(i);

    OracleResult res;
    res.value = std::numeric_limits<double>::infinity();
    res.points = total;
    while (true) {
        res.value = std::min(res.value, work.eval(qv, qw, wt));
        size_t i = 0;
        while (i < axes.size()) {
            if (++pick[i] < axes[i].grid.size()) {
                apply(i);
                break;
            }
            pick[i] = 0;
            apply(i);
            ++i;
        }
        if (i == axes.size()) break;
    }
    double weight = std::abs(wt.t1) + std::abs(wt.t2) + std::abs(wt.t3);
    res.gap = grid_gap_bound(work.slots_v, resolution, int(masksV.size()), weight) +
              grid_gap_bound(work.slots_w, resolution, int(masksW.size()), weight);
    return res;
}

} // namespace fncomp
