#include "fncomp/laws.hpp"

#include <algorithm>
#include <cmath>

#include "fncomp/rng.hpp"
#include "fncomp/sets.hpp"

namespace fncomp {

namespace {

constexpr double kChainTol = 1e-12;

bool markov_chain_holds(const Pmf& joint, RoleSet A, RoleSet B, RoleSet C) {
    // A - B - C  <=>  p(a,b,c) p(b) = p(a,b) p(b,c) on every cell.
    Pmf m_abc = joint.marginal(A | B | C);
    Pmf m_ab = m_abc.marginal(A | B);
    Pmf m_bc = m_abc.marginal(B | C);
    Pmf m_b = m_abc.marginal(B);
    std::vector<int> idx;
    for (size_t f = 0; f < m_abc.size(); ++f) {
        m_abc.unravel(f, idx);
        double pabc = m_abc.flat(f);
        double pb = m_b.project_at(m_abc.axes(), idx);
        double pab = m_ab.project_at(m_abc.axes(), idx);
        double pbc = m_bc.project_at(m_abc.axes(), idx);
        if (std::abs(pabc * pb - pab * pbc) > kChainTol) return false;
    }
    return true;
}

std::vector<double> marginal_vector(const ProblemSpec& spec, Role r) {
    Pmf m = spec.pmf.marginal(role_bit(r));
    std::vector<double> out(m.size());
    for (size_t i = 0; i < m.size(); ++i) out[i] = m.flat(i);
    return out;
}

// Channel with zero-marginal values dropped and masks replaced by numeric
// supports.
Channel relabel_by_support(const Channel& ch, const std::vector<double>& pt) {
    SupportSet ss = support_set(ch.rows, pt);
    Channel out;
    for (const auto& e : ss.entries) {
        out.masks.push_back(e.set);
    }
    out.rows.assign(ch.rows.size(), std::vector<double>(ss.entries.size(), 0.0));
    for (size_t t = 0; t < ch.rows.size(); ++t)
        for (size_t k = 0; k < ss.entries.size(); ++k)
            out.rows[t][k] = ch.rows[t][size_t(ss.entries[k].index)];
    return out;
}

} // namespace

JointWitness make_witness(const ProblemSpec& spec, const Channel& chanV,
                          const Channel& chanW) {
    JointWitness w;
    w.chanV = chanV;
    w.chanW = chanW;
    w.joint = make_joint_vxywz(spec, chanV.rows, chanW.rows);
    w.chain_v_ok = markov_chain_holds(w.joint, roles(Role::V), roles(Role::X),
                                      roles(Role::Y, Role::W, Role::Z));
    w.chain_w_ok = markov_chain_holds(w.joint, roles(Role::V, Role::X, Role::Z),
                                      roles(Role::Y), roles(Role::W));
    return w;
}

JointWitness random_admissible_witness(const ProblemSpec& spec, uint64_t seed,
                                       int kv, int kw) {
    if (kv <= 0) kv = spec.nx() + 1;
    if (kw <= 0) kw = spec.ny() + 1;
    Rng rng(mix_seed(seed, 0x57AC5EEDULL));

    CharGraph gx = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    Bitset cover_x(spec.nx());
    for (int x = 0; x < spec.nx(); ++x) cover_x.set(x);
    MultisetOptions vopts;
    vopts.total = kv;
    std::vector<MultiFamily> v_families =
        multisets(independent_sets(gx), cover_x, vopts);
    const MultiFamily& fv = v_families[size_t(rng.below(int(v_families.size())))];
    Channel chanV = dirichlet_channel(fv.expand(), spec.nx(), rng.next(), 1e-6);

    CharGraph gw = build_generalized_graph(spec, Role::X, chanV.masks);
    Bitset cover_y(spec.ny());
    for (int y = 0; y < spec.ny(); ++y) cover_y.set(y);
    MultisetOptions wopts;
    wopts.total = kw;
    std::vector<MultiFamily> w_families =
        multisets(independent_sets(gw), cover_y, wopts);
    const MultiFamily& fw = w_families[size_t(rng.below(int(w_families.size())))];
    Channel chanW = dirichlet_channel(fw.expand(), spec.ny(), rng.next(), 1e-6);

    return make_witness(spec, chanV, chanW);
}

ZeroErrorResult zero_error_check(const ProblemSpec& spec, const JointWitness& w) {
    const int nv = w.chanV.values(), nw = w.chanW.values();
    const int nz = spec.nz(), nf = spec.nf();

    // Pushforward p(f, v, w, z).
    std::vector<double> pf(size_t(nf) * nv * nw * nz, 0.0);
    std::vector<int> idx;
    for (size_t cell = 0; cell < w.joint.size(); ++cell) {
        double p = w.joint.flat(cell);
        if (p <= 0.0) continue;
        w.joint.unravel(cell, idx); // axes X,Y,Z,V,W
        int f = spec.f(idx[0], idx[1], idx[2]);
        pf[((size_t(f) * nv + idx[3]) * nw + idx[4]) * nz + idx[2]] += p;
    }
    double h_fvwz = 0.0;
    for (double p : pf)
        if (p > 0.0) h_fvwz -= p * std::log2(p);
    double h_vwz = 0.0;
    for (int v = 0; v < nv; ++v)
        for (int wi = 0; wi < nw; ++wi)
            for (int z = 0; z < nz; ++z) {
                double p = 0.0;
                for (int f = 0; f < nf; ++f)
                    p += pf[((size_t(f) * nv + v) * nw + wi) * nz + z];
                if (p > 0.0) h_vwz -= p * std::log2(p);
            }
    ZeroErrorResult res;
    res.entropy_side = std::abs(h_fvwz - h_vwz) <= 1e-12;

    // Pairwise side: at most one f value per (v,w,z) over positive cells.
    res.pairwise_side = true;
    std::vector<int> seen(size_t(nv) * nw * nz, -1);
    for (size_t cell = 0; cell < w.joint.size() && res.pairwise_side; ++cell) {
        double p = w.joint.flat(cell);
        if (p <= 0.0) continue;
        w.joint.unravel(cell, idx);
        int f = spec.f(idx[0], idx[1], idx[2]);
        size_t key = (size_t(idx[3]) * nw + idx[4]) * nz + idx[2];
        if (seen[key] == -1) seen[key] = f;
        else if (seen[key] != f) res.pairwise_side = false;
    }

    if (res.entropy_side != res.pairwise_side)
        fail(ErrorKind::EquivalenceViolation,
             "zero-error sides disagree (entropy vs pairwise)");
    return res;
}

SupportEquivalenceReport support_equivalence_check(const ProblemSpec& spec,
                                                   const JointWitness& w) {
    SupportEquivalenceReport rep;
    rep.chain_v = w.chain_v_ok;
    rep.chain_w = w.chain_w_ok;
    if (!rep.chain_v || !rep.chain_w) {
        rep.abstained = true;
        return rep;
    }

    std::vector<double> px = marginal_vector(spec, Role::X);
    std::vector<double> py = marginal_vector(spec, Role::Y);
    SupportSet sx = support_set(w.chanV.rows, px);
    SupportSet sy = support_set(w.chanW.rows, py);

    // Claim a: X in S_X(V), Y in S_Y(W).
    rep.claim_a = true;
    for (int x = 0; x < spec.nx(); ++x) {
        if (px[size_t(x)] <= 0.0) continue;
        double mass = 0.0;
        for (const auto& e : sx.entries)
            if (e.set.test(x)) mass += w.chanV.rows[size_t(x)][size_t(e.index)];
        if (std::abs(mass - 1.0) > 1e-12) rep.claim_a = false;
    }
    for (int y = 0; y < spec.ny(); ++y) {
        if (py[size_t(y)] <= 0.0) continue;
        double mass = 0.0;
        for (const auto& e : sy.entries)
            if (e.set.test(y)) mass += w.chanW.rows[size_t(y)][size_t(e.index)];
        if (std::abs(mass - 1.0) > 1e-12) rep.claim_a = false;
    }

    // Claim b: the chains survive the support-set relabeling.
    JointWitness relabeled = make_witness(spec, relabel_by_support(w.chanV, px),
                                          relabel_by_support(w.chanW, py));
    rep.claim_b = relabeled.chain_v_ok && relabeled.chain_w_ok;

    ZeroErrorResult ze = zero_error_check(spec, w);
    rep.zero_error = ze.value();

    // Memberships through the numeric supports.
    CharGraph gx = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    rep.membership_v = true;
    std::vector<Bitset> v_supports;
    for (const auto& e : sx.entries) {
        v_supports.push_back(e.set);
        if (!gx.is_independent(e.set)) rep.membership_v = false;
    }
    rep.membership_w = rep.membership_v;
    if (rep.membership_v) {
        try {
            CharGraph gen = build_generalized_graph(spec, Role::X, v_supports);
            for (const auto& e : sy.entries)
                if (!gen.is_independent(e.set)) rep.membership_w = false;
        } catch (const Error&) {
            rep.membership_w = false;
        }
    }

    // The shared pairwise condition of proof claims c and d.
    bool pairwise = true;
    for (const auto& ev : sx.entries)
        for (const auto& ew : sy.entries)
            for (int z = 0; z < spec.nz() && pairwise; ++z) {
                int seen = -1;
                for (int x1 : ev.set.bits())
                    for (int y1 : ew.set.bits()) {
                        if (spec.p(x1, y1, z) <= 0.0) continue;
                        int f = spec.f(x1, y1, z);
                        if (seen == -1) seen = f;
                        else if (seen != f) { pairwise = false; }
                    }
            }

    rep.claim_c = (rep.zero_error == pairwise);
    rep.claim_d = ((rep.membership_v && rep.membership_w) == pairwise);
    rep.forward_ok = !rep.zero_error || (rep.membership_v && rep.membership_w);
    rep.backward_ok = !(rep.membership_v && rep.membership_w) || rep.zero_error;
    return rep;
}

double support_relabel_drift(const ProblemSpec& spec, const Channel& chanV,
                             const Channel& chanW) {
    std::vector<double> px = marginal_vector(spec, Role::X);
    std::vector<double> py = marginal_vector(spec, Role::Y);
    RateTriple before = rate_triple(spec, chanV, chanW);
    RateTriple after = rate_triple(spec, relabel_by_support(chanV, px),
                                   relabel_by_support(chanW, py));
    return std::max({std::abs(before.a - after.a), std::abs(before.b - after.b),
                     std::abs(before.s - after.s)});
}

} // namespace fncomp
