#include "fncomp/graphs.hpp"

#include <algorithm>

#include "fncomp/sets.hpp"

namespace fncomp {

int CharGraph::edge_count() const {
    int total = 0;
    for (const auto& row : adj) total += row.count();
    return total / 2;
}

std::vector<std::pair<int, int>> CharGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j)
            if (edge(i, j)) out.push_back({i, j});
    return out;
}

bool CharGraph::is_independent(const Bitset& s) const {
    for (int i : s.bits())
        if (adj[size_t(i)].intersects(s)) return false;
    return true;
}

bool CharGraph::is_complete() const {
    for (int i = 0; i < n(); ++i)
        if (adj[size_t(i)].count() != n() - 1) return false;
    return true;
}

bool CharGraph::same_edges(const CharGraph& other) const {
    if (n() != other.n()) return false;
    for (int i = 0; i < n(); ++i)
        if (adj[size_t(i)] != other.adj[size_t(i)]) return false;
    return true;
}

CharGraph CharGraph::complement() const {
    CharGraph out = empty(vertices, provenance + " (complement)");
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j)
            if (!edge(i, j)) out.add_edge(i, j);
    return out;
}

CharGraph CharGraph::empty(std::vector<std::string> labels, std::string prov) {
    CharGraph g;
    g.vertices = std::move(labels);
    g.adj.assign(g.vertices.size(), Bitset(int(g.vertices.size())));
    g.provenance = std::move(prov);
    return g;
}

namespace {

void check_cap(int nverts, int cap, const std::string& what) {
    if (nverts > cap)
        fail(ErrorKind::Size, what + " has " + std::to_string(nverts) +
                                  " vertices, cap " + std::to_string(cap));
}

} // namespace

CharGraph build_char_graph(const ProblemSpec& spec, Role target, RoleSet given,
                           int vertex_cap) {
    if (target != Role::X && target != Role::Y && target != Role::Z)
        fail(ErrorKind::Role, "target must be a source role");
    if (role_in(given, target))
        fail(ErrorKind::Role, "target cannot be in the given set");
    if (given & ~roles(Role::X, Role::Y, Role::Z))
        fail(ErrorKind::Role, "given must be a subset of {X,Y,Z}");

    const int nt = spec.alphabet_size(target);
    check_cap(nt, vertex_cap, "char graph");

    // Flatten the given roles into one context coordinate; roles outside
    // target+given stay hidden and f must be constant over them on support.
    std::vector<Role> given_roles;
    for (Role r : {Role::X, Role::Y, Role::Z})
        if (role_in(given, r)) given_roles.push_back(r);
    int nc = 1;
    for (Role r : given_roles) nc *= spec.alphabet_size(r);

    // p(target, context) and the induced f-hat(target, context).
    std::vector<double> pt(size_t(nt) * size_t(nc), 0.0);
    std::vector<int> fhat(size_t(nt) * size_t(nc), -1);
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z) {
                double pr = spec.p(x, y, z);
                if (pr <= 0.0) continue;
                int t = target == Role::X ? x : target == Role::Y ? y : z;
                int c = 0;
                for (Role r : given_roles) {
                    int coord = r == Role::X ? x : r == Role::Y ? y : z;
                    c = c * spec.alphabet_size(r) + coord;
                }
                size_t cell = size_t(t) * size_t(nc) + size_t(c);
                pt[cell] += pr;
                int fv = spec.f(x, y, z);
                if (fhat[cell] == -1) {
                    fhat[cell] = fv;
                } else if (fhat[cell] != fv) {
                    fail(ErrorKind::InconsistentF,
                         "f is not determined by (" + role_name(target) + "," +
                             role_set_name(given) +
                             ") on the support; condition on the remaining roles");
                }
            }

    CharGraph g = CharGraph::empty(
        spec.alphabet(target),
        "G_{" + role_name(target) + "|" + role_set_name(given) + "}");
    for (int a = 0; a < nt; ++a)
        for (int b = a + 1; b < nt; ++b)
            for (int c = 0; c < nc; ++c) {
                size_t ca = size_t(a) * size_t(nc) + size_t(c);
                size_t cb = size_t(b) * size_t(nc) + size_t(c);
                if (pt[ca] > 0.0 && pt[cb] > 0.0 && fhat[ca] != fhat[cb]) {
                    g.add_edge(a, b);
                    break;
                }
            }
    return g;
}

CharGraph build_joint_char_graph(const ProblemSpec& spec, int vertex_cap) {
    const int nprod = spec.nx() * spec.ny();
    check_cap(nprod, vertex_cap, "joint char graph");

    std::vector<std::string> labels;
    labels.reserve(size_t(nprod));
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            labels.push_back("(" + spec.alphabet_X[size_t(x)] + "," +
                             spec.alphabet_Y[size_t(y)] + ")");
    CharGraph g = CharGraph::empty(std::move(labels), "G_{X,Y|Z}");

    auto vid = [&](int x, int y) { return x * spec.ny() + y; };
    for (int x1 = 0; x1 < spec.nx(); ++x1)
        for (int y1 = 0; y1 < spec.ny(); ++y1)
            for (int x2 = 0; x2 < spec.nx(); ++x2)
                for (int y2 = 0; y2 < spec.ny(); ++y2) {
                    if (vid(x1, y1) >= vid(x2, y2)) continue;
                    for (int z = 0; z < spec.nz(); ++z) {
                        if (spec.p(x1, y1, z) > 0.0 && spec.p(x2, y2, z) > 0.0 &&
                            spec.f(x1, y1, z) != spec.f(x2, y2, z)) {
                            g.add_edge(vid(x1, y1), vid(x2, y2));
                            break;
                        }
                    }
                }
    return g;
}

CharGraph build_generalized_graph(const ProblemSpec& spec, Role message_source,
                                  const std::vector<Bitset>& membership,
                                  const std::vector<std::vector<double>>* channel_rows,
                                  int vertex_cap) {
    if (message_source != Role::X && message_source != Role::Y)
        fail(ErrorKind::Role, "message source must be X or Y");
    const bool msg_is_x = message_source == Role::X;
    const int nm = msg_is_x ? spec.nx() : spec.ny(); // message-source alphabet
    const int no = msg_is_x ? spec.ny() : spec.nx(); // other-source alphabet
    check_cap(no, vertex_cap, "generalized char graph");

    // Every positive-marginal message symbol must lie in some member set.
    Bitset covered(nm);
    for (const Bitset& s : membership) {
        if (s.universe() != nm)
            fail(ErrorKind::MembershipViolation, "member set over wrong alphabet");
        covered |= s;
    }
    Pmf marg = spec.pmf.marginal(role_bit(message_source));
    for (int m = 0; m < nm; ++m)
        if (marg.flat(size_t(m)) > 0.0 && !covered.test(m))
            fail(ErrorKind::MembershipViolation,
                 "symbol " + spec.alphabet(message_source)[size_t(m)] +
                     " is not covered by the membership family");

    if (channel_rows) {
        if (int(channel_rows->size()) != nm ||
            (!channel_rows->empty() &&
             (*channel_rows)[0].size() != membership.size()))
            fail(ErrorKind::MembershipViolation, "channel shape mismatch");
        for (int m = 0; m < nm; ++m) {
            double row_sum = 0.0;
            for (size_t v = 0; v < membership.size(); ++v) {
                double q = (*channel_rows)[size_t(m)][v];
                if (q < 0.0) fail(ErrorKind::MembershipViolation, "negative channel entry");
                if (q > 0.0 && !membership[v].test(m))
                    fail(ErrorKind::MembershipViolation,
                         "channel mass off the membership mask");
                row_sum += q;
            }
            if (marg.flat(size_t(m)) > 0.0 && std::abs(row_sum - 1.0) > 1e-12)
                fail(ErrorKind::MembershipViolation, "channel row does not sum to 1");
        }
    }

    auto p_of = [&](int m, int o, int z) {
        return msg_is_x ? spec.p(m, o, z) : spec.p(o, m, z);
    };
    auto f_of = [&](int m, int o, int z) {
        return msg_is_x ? spec.f(m, o, z) : spec.f(o, m, z);
    };

    // f-tilde(v, o, z): the common f over masked message symbols on support;
    // -2 marks "no support", anything else is the f index.
    const int nz = spec.nz();
    const Role other = msg_is_x ? Role::Y : Role::X;
    std::vector<std::vector<int>> ftilde(membership.size());
    for (size_t v = 0; v < membership.size(); ++v) {
        ftilde[v].assign(size_t(no) * size_t(nz), -2);
        for (int o = 0; o < no; ++o)
            for (int z = 0; z < nz; ++z) {
                int common = -2;
                for (int m : membership[v].bits()) {
                    if (p_of(m, o, z) <= 0.0) continue;
                    int fv = f_of(m, o, z);
                    if (common == -2) {
                        common = fv;
                    } else if (common != fv) {
                        fail(ErrorKind::InconsistentFTilde,
                             "member set " +
                                 membership[v].to_string(
                                     spec.alphabet(message_source)) +
                                 " is not an independent set: f-tilde multivalued at (" +
                                 spec.alphabet(other)[size_t(o)] + "," +
                                 spec.alphabet_Z[size_t(z)] + ")");
                    }
                }
                ftilde[v][size_t(o) * size_t(nz) + size_t(z)] = common;
            }
    }

    CharGraph g = CharGraph::empty(
        spec.alphabet(other),
        "G_{" + role_name(other) + "|V," + role_name(Role::Z) + "} via " +
            role_name(message_source) + "-family");
    for (int o1 = 0; o1 < no; ++o1)
        for (int o2 = o1 + 1; o2 < no; ++o2) {
            bool connected = false;
            for (size_t v = 0; v < membership.size() && !connected; ++v)
                for (int z = 0; z < nz && !connected; ++z) {
                    int f1 = ftilde[v][size_t(o1) * size_t(nz) + size_t(z)];
                    int f2 = ftilde[v][size_t(o2) * size_t(nz) + size_t(z)];
                    if (f1 != -2 && f2 != -2 && f1 != f2) connected = true;
                }
            if (connected) g.add_edge(o1, o2);
        }
    return g;
}

GraphEqualityHypotheses graph_equality_hypotheses(const ProblemSpec& spec) {
    GraphEqualityHypotheses h;
    h.full_support = true;
    for (size_t i = 0; i < spec.pmf.size(); ++i)
        if (spec.pmf.flat(i) <= 0.0) { h.full_support = false; break; }
    CharGraph g = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    h.complete_graph = g.is_complete();
    h.cond_independent = check_conditional_independence(spec);
    return h;
}

GraphEqualityReport verify_graph_equality(const ProblemSpec& spec, int budget) {
    GraphEqualityReport report;
    report.hypotheses = graph_equality_hypotheses(spec);

    CharGraph gx = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    CharGraph gy_ref = build_char_graph(spec, Role::Y, roles(Role::X, Role::Z));
    SetFamily gamma = independent_sets(gx);

    Bitset need(spec.nx());
    Pmf marg = spec.pmf.marginal(role_bit(Role::X));
    for (int x = 0; x < spec.nx(); ++x)
        if (marg.flat(size_t(x)) > 0.0) need.set(x);

    // Distinct covering sub-families of Gamma(G_{X|Y,Z}); multiplicities and
    // channel weights cannot change the mask-determined graph.
    const int nsets = int(gamma.elems.size());
    std::vector<Bitset> chosen;
    bool exceeded = false;

    std::function<void(int, Bitset)> recurse = [&](int i, Bitset cov) {
        if (exceeded) return;
        if (i == nsets) {
            if (!chosen.empty() && need.is_subset_of(cov)) {
                if (report.candidates_checked >= budget) { exceeded = true; return; }
                GraphEqualityCandidate cand;
                cand.family = chosen;
                CharGraph gyv = build_generalized_graph(spec, Role::X, chosen);
                cand.equal = gyv.same_edges(gy_ref);
                cand.extra_edges = gyv.edge_count() - gy_ref.edge_count();
                report.candidates_checked++;
                if (cand.equal) report.equal_count++;
                else report.all_equal = false;
                report.candidates.push_back(std::move(cand));
            }
            return;
        }
        recurse(i + 1, cov);
        chosen.push_back(gamma.elems[size_t(i)]);
        recurse(i + 1, cov | gamma.elems[size_t(i)]);
        chosen.pop_back();
    };
    recurse(0, Bitset(spec.nx()));
    if (exceeded)
        fail(ErrorKind::Budget,
             "graph-equality verification exceeds candidate budget " + std::to_string(budget));
    return report;
}

} // namespace fncomp
