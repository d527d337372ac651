#include "doctest.h"

#include <cmath>

#include "fncomp/entropy.hpp"
#include "fncomp/fixtures.hpp"
#include "fncomp/laws.hpp"
#include "fncomp/rng.hpp"

using namespace fncomp;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

std::vector<Bitset> singleton_masks(int n) {
    std::vector<Bitset> out;
    for (int i = 0; i < n; ++i) {
        Bitset s(n);
        s.set(i);
        out.push_back(s);
    }
    return out;
}

SolverOptions quick(int restarts = 4) {
    SolverOptions opts;
    opts.restarts = restarts;
    return opts;
}

} // namespace

TEST_CASE("constant f has zero graph entropy") {
    ProblemSpec spec = load_problem(R"({
        "X":["0","1","2"],"Y":["0","1"],"Z":["*"],"F":["k"],
        "p":[{"x":"0","y":"0","z":"*","p":0.2},{"x":"0","y":"1","z":"*","p":0.1},
             {"x":"1","y":"0","z":"*","p":0.25},{"x":"1","y":"1","z":"*","p":0.15},
             {"x":"2","y":"0","z":"*","p":0.2},{"x":"2","y":"1","z":"*","p":0.1}],
        "f":[{"x":"0","y":"0","z":"*","v":"k"},{"x":"0","y":"1","z":"*","v":"k"},
             {"x":"1","y":"0","z":"*","v":"k"},{"x":"1","y":"1","z":"*","v":"k"},
             {"x":"2","y":"0","z":"*","v":"k"},{"x":"2","y":"1","z":"*","v":"k"}]})");
    SolveReport rep = conditional_graph_entropy(spec, Role::X, roles(Role::Y),
                                                {FamilyMode::Maximal, 0}, quick());
    CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("complete graph collapses to H(X|Y)") {
    ProblemSpec spec = fixture("ex2:0.75");
    SolveReport rep = conditional_graph_entropy(spec, Role::X, roles(Role::Y),
                                                {FamilyMode::Maximal, 0}, quick());
    CHECK(rep.value == doctest::Approx(h2(0.75)).epsilon(1e-9));
    CHECK(rep.value <= std::log2(2.0) + 1e-12); // within [0, log2 |X|]
}

TEST_CASE("solver matches the grid oracle on Example 1") {
    ProblemSpec spec = fixture("ex1");
    CharGraph g = build_char_graph(spec, Role::X, roles(Role::Y));
    auto p_tc = target_context_matrix(spec, Role::X, roles(Role::Y));
    SetFamily maximal = maximal_independent_sets(g);

    SolveReport solved = solve_single_family(p_tc, maximal.elems, quick(8));
    OracleResult oracle = grid_oracle_entropy(p_tc, maximal.elems, 40);
    CHECK(solved.value <= oracle.value + 1e-3);          // solver at least as good
    CHECK(std::abs(solved.value - oracle.value) <= 1e-3 + oracle.gap);
    CHECK(solved.converged);
}

TEST_CASE("convexity: restarts agree to 1e-6") {
    ProblemSpec spec = fixture("ex1");
    SolveReport rep = conditional_graph_entropy(spec, Role::X, roles(Role::Y),
                                                {FamilyMode::Maximal, 0}, quick(8));
    CHECK(rep.restarts_used == 8);
    CHECK(rep.restart_spread <= 1e-6);

    SolveReport rep3 = conditional_graph_entropy(fixture("ex3"), Role::X,
                                                 roles(Role::Y, Role::Z),
                                                 {FamilyMode::Maximal, 0}, quick(8));
    CHECK(rep3.restart_spread <= 1e-6);
}

TEST_CASE("family-mode monotonicity; maximal and multiset minima coincide") {
    for (const char* name : {"ex1", "ex2:0.75", "ex3", "ex4", "exinv"}) {
        ProblemSpec spec = fixture(name);
        SolveReport maximal = conditional_graph_entropy(
            spec, Role::X, roles(Role::Y, Role::Z), {FamilyMode::Maximal, 0},
            quick());
        SolveReport all = conditional_graph_entropy(
            spec, Role::X, roles(Role::Y, Role::Z), {FamilyMode::All, 0}, quick());
        SolveReport multi = conditional_graph_entropy(
            spec, Role::X, roles(Role::Y, Role::Z), {FamilyMode::Multiset, 0},
            quick(2));
        CHECK(all.value <= maximal.value + 1e-6);
        CHECK(multi.value <= all.value + 1e-6);
        // Restricting to maximal independent sets loses nothing for one source.
        CHECK(std::abs(maximal.value - multi.value) <= 1e-4);
    }
}

TEST_CASE("degenerate rate triple: V=X, W=Y on an invertible f") {
    ProblemSpec spec = fixture("exinv");
    Channel chanV = uniform_channel(singleton_masks(2), 2); // identity
    Channel chanW = uniform_channel(singleton_masks(2), 2);
    RateTriple t = rate_triple(spec, chanV, chanW);
    double hxy = conditional_entropy(spec.pmf, roles(Role::X), roles(Role::Y));
    double hyx = conditional_entropy(spec.pmf, roles(Role::Y), roles(Role::X));
    double hj = conditional_entropy(spec.pmf, roles(Role::X, Role::Y), roles());
    CHECK(t.a == doctest::Approx(hxy).epsilon(1e-12));
    CHECK(t.b == doctest::Approx(hyx).epsilon(1e-12));
    CHECK(t.s == doctest::Approx(hj).epsilon(1e-12));
}

TEST_CASE("Example 2: every admissible pair gives the Slepian-Wolf triple") {
    ProblemSpec spec = fixture("ex2:0.75");
    double hxy = conditional_entropy(spec.pmf, roles(Role::X), roles(Role::Y));
    double hyx = conditional_entropy(spec.pmf, roles(Role::Y), roles(Role::X));
    double hj = conditional_entropy(spec.pmf, roles(Role::X, Role::Y), roles());
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Channel chanV = dirichlet_channel(singleton_masks(2), 2, seed * 7 + 1, 1e-6);
        Channel chanW = dirichlet_channel(singleton_masks(2), 2, seed * 7 + 2, 1e-6);
        RateTriple t = rate_triple(spec, chanV, chanW);
        CHECK(t.a == doctest::Approx(hxy).epsilon(1e-9));
        CHECK(t.b == doctest::Approx(hyx).epsilon(1e-9));
        CHECK(t.s == doctest::Approx(hj).epsilon(1e-9));
    }
}

TEST_CASE("independent-given-Z sources split the triple") {
    ProblemSpec spec = fixture("ex3");
    for (uint64_t seed = 0; seed < 8; ++seed) {
        JointWitness w = random_admissible_witness(spec, seed);
        RateTriple t = rate_triple(spec, w.chanV, w.chanW);
        double avyz = conditional_mutual_information(
            w.joint, roles(Role::V), roles(Role::X), roles(Role::Y, Role::Z));
        double bwxz = conditional_mutual_information(
            w.joint, roles(Role::Y), roles(Role::W), roles(Role::X, Role::Z));
        CHECK(t.a == doctest::Approx(avyz).epsilon(1e-9));
        CHECK(t.b == doctest::Approx(bwxz).epsilon(1e-9));
    }
}

TEST_CASE("triple chain-rule self-consistency") {
    ProblemSpec spec = fixture("ex4");
    for (uint64_t seed = 0; seed < 12; ++seed) {
        JointWitness w = random_admissible_witness(spec, 31 + seed);
        RateTriple t = rate_triple(spec, w.chanV, w.chanW);
        CHECK(t.s >= t.a - 1e-12);
        CHECK(t.s >= t.b - 1e-12);
        double ivw_z = conditional_mutual_information(w.joint, roles(Role::V),
                                                      roles(Role::W), roles(Role::Z));
        CHECK(t.s == doctest::Approx(t.a + t.b + ivw_z).epsilon(1e-9));
    }
}

TEST_CASE("scalarize returns the support of the triple region") {
    RateTriple t{0.3, 0.4, 1.0};
    // R_Y cheap: corner (a, s-a); R_X cheap: corner (s-b, b).
    CHECK(scalarize(t, 0.5) == doctest::Approx(0.3 + 0.5 * (1.0 - 0.3)));
    CHECK(scalarize(t, 2.0) == doctest::Approx((1.0 - 0.4) + 2.0 * 0.4));
    CHECK(scalarize(t, 1.0) == doctest::Approx(1.0)); // both corners cost s
    // Brute-force support check over a coarse feasible grid.
    for (double lam : {0.25, 0.7, 1.0, 1.8, 5.0}) {
        double brute = 1e18;
        for (double rx = 0.0; rx <= 3.0; rx += 0.001) {
            double ry = std::max(t.b, t.s - rx);
            if (rx < t.a) continue;
            brute = std::min(brute, rx + lam * ry);
        }
        CHECK(scalarize(t, lam) == doctest::Approx(brute).epsilon(5e-3));
    }
}

TEST_CASE("MaskError when W is not independent in the induced graph") {
    ProblemSpec spec = fixture("ex4");
    Channel chanV = uniform_channel(singleton_masks(3), 3);
    // {0,1} is an edge of G_{Y|X} (parities differ), so this mask is invalid.
    Bitset bad(3);
    bad.set(0);
    bad.set(1);
    Bitset rest(3);
    rest.set(2);
    Channel chanW = uniform_channel({bad, rest}, 3);
    try {
        rate_triple(spec, chanV, chanW);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Mask);
    }
}

TEST_CASE("pair solver agrees with the scalarized oracle on Example 4") {
    ProblemSpec spec = fixture("ex4");
    std::vector<Bitset> masksV = singleton_masks(3);
    // The ex4 reduced multiset { {1},{0,2},{0,2},{0,2} }.
    Bitset m1(3), m02(3);
    m1.set(1);
    m02.set(0);
    m02.set(2);
    std::vector<Bitset> masksW = {m1, m02, m02, m02};

    for (double lambda : {1.0, 0.5, 2.0}) {
        SolverOptions opts;
        opts.restarts = 16;
        PairSolveReport solved =
            solve_pair_scalarized(spec, masksV, masksW, lambda, opts);
        OracleResult oracle =
            grid_oracle_scalarized(spec, masksV, masksW, lambda, 20);
        CHECK(solved.objective <= oracle.value + 1e-3);
        CHECK(std::abs(solved.objective - oracle.value) <= 1e-3 + oracle.gap);
        // The reported triple reproduces the objective through scalarize().
        CHECK(scalarize(solved.triple, lambda) ==
              doctest::Approx(solved.objective).epsilon(1e-9));
        // And the triple matches the generic-path evaluation of the channels.
        RateTriple check = rate_triple(spec, solved.chanV, solved.chanW);
        CHECK(check.a == doctest::Approx(solved.triple.a).epsilon(1e-9));
        CHECK(check.b == doctest::Approx(solved.triple.b).epsilon(1e-9));
        CHECK(check.s == doctest::Approx(solved.triple.s).epsilon(1e-9));
    }
}

TEST_CASE("oracle point cap raises SizeError") {
    ProblemSpec spec = fixture("ex3");
    CharGraph g = build_char_graph(spec, Role::X, roles(Role::Y, Role::Z));
    auto p_tc = target_context_matrix(spec, Role::X, roles(Role::Y, Role::Z));
    SetFamily all = independent_sets(g);
    try {
        grid_oracle_entropy(p_tc, all.elems, 60, 1000);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Size);
    }
}

TEST_CASE("channel validation catches mask and normalization violations") {
    std::vector<double> pt = {0.5, 0.5};
    Channel ch = uniform_channel(singleton_masks(2), 2);
    CHECK_NOTHROW(ch.validate(pt));
    ch.rows[0][1] = 0.1; // off-mask mass
    CHECK_THROWS_AS(ch.validate(pt), Error);
    Channel bad_sum = uniform_channel(singleton_masks(2), 2);
    bad_sum.rows[0][0] = 0.9;
    CHECK_THROWS_AS(bad_sum.validate(pt), Error);
}

TEST_CASE("oracle on a 2-vertex edgeless graph finds zero") {
    // Single whole-alphabet set: the channel is forced and I(V;T|C) = 0.
    std::vector<std::vector<double>> p_tc = {{0.25, 0.25}, {0.25, 0.25}};
    Bitset whole(2);
    whole.set(0);
    whole.set(1);
    OracleResult oracle = grid_oracle_entropy(p_tc, {whole}, 20);
    CHECK(oracle.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oracle.points == 1);
}


TEST_CASE("pair gradients match central finite differences") {
    // The block-descent gradients are the most intricate formulas in the
    // solver; differentiate the objective numerically along simplex-feasible
    // directions (e_i - e_j within a row) and compare.
    ProblemSpec spec = fixture("ex4");
    std::vector<Bitset> masksV = singleton_masks(3);
    Bitset m1(3), m02(3);
    m1.set(1);
    m02.set(0);
    m02.set(2);
    std::vector<Bitset> masksW = {m1, m02, m02};

    for (double lambda : {0.3, 0.9, 1.0, 1.7, 6.0}) {
        for (uint64_t seed = 1; seed <= 4; ++seed) {
            Channel chanV = dirichlet_channel(masksV, 3, seed, 1e-2);
            Channel chanW = dirichlet_channel(masksW, 3, seed + 100, 1e-2);
            std::vector<std::vector<double>> gv, gw;
            pair_objective(spec, masksV, masksW, lambda, chanV.rows, chanW.rows,
                           &gv, &gw);
            const double eps = 1e-6;
            // W rows y=0 and y=2 have two slots ({0,2} twice): perturb within.
            for (int y : {0, 2}) {
                auto hi = chanW.rows, lo = chanW.rows;
                hi[size_t(y)][1] += eps;
                hi[size_t(y)][2] -= eps;
                lo[size_t(y)][1] -= eps;
                lo[size_t(y)][2] += eps;
                double fd = (pair_objective(spec, masksV, masksW, lambda,
                                            chanV.rows, hi) -
                             pair_objective(spec, masksV, masksW, lambda,
                                            chanV.rows, lo)) /
                            (2 * eps);
                double analytic = gw[size_t(y)][1] - gw[size_t(y)][2];
                CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
            }
        }
    }

    // V gradients need a family with a multi-slot row: use independent sets
    // of G_{X|Y,Z} on ex1 (slots overlap on vertex 2).
    ProblemSpec ex1 = fixture("ex1");
    Bitset s12(4), s23(4), s34(4);
    s12.set(0); s12.set(1);
    s23.set(1); s23.set(2);
    s34.set(2); s34.set(3);
    std::vector<Bitset> vfam = {s12, s23, s34};
    CharGraph gw_graph = build_generalized_graph(ex1, Role::X, vfam);
    SetFamily wfam = maximal_independent_sets(gw_graph);
    for (double lambda : {0.4, 2.5}) {
        Channel chanV = dirichlet_channel(vfam, 4, 7, 1e-2);
        Channel chanW = dirichlet_channel(wfam.elems, 4, 8, 1e-2);
        std::vector<std::vector<double>> gv, gw;
        pair_objective(ex1, vfam, wfam.elems, lambda, chanV.rows, chanW.rows,
                       &gv, &gw);
        const double eps = 1e-6;
        // X symbol "2" (index 1) lies in both {1,2} and {2,3}.
        auto hi = chanV.rows, lo = chanV.rows;
        hi[1][0] += eps;
        hi[1][1] -= eps;
        lo[1][0] -= eps;
        lo[1][1] += eps;
        double fd = (pair_objective(ex1, vfam, wfam.elems, lambda, hi, chanW.rows) -
                     pair_objective(ex1, vfam, wfam.elems, lambda, lo, chanW.rows)) /
                    (2 * eps);
        double analytic = gv[1][0] - gv[1][1];
        CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
    }
}
