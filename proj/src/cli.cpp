#include "fncomp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fncomp/entropy.hpp"
#include "fncomp/fixtures.hpp"
#include "fncomp/graphs.hpp"
#include "fncomp/laws.hpp"
#include "fncomp/model.hpp"
#include "fncomp/regions.hpp"
#include "fncomp/rng.hpp"
#include "fncomp/sets.hpp"

namespace fncomp {

namespace {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

RoleSet parse_given(const std::string& text, Role target) {
    if (text.empty()) {
        RoleSet all = roles(Role::X, Role::Y, Role::Z);
        return all & ~role_bit(target);
    }
    RoleSet out = 0;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out |= role_bit(role_from_name(tok));
    }
    return out;
}

std::vector<double> parse_lambdas(const std::string& text) {
    if (text.empty()) return default_lambda_grid();
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    if (out.empty()) fail(ErrorKind::Schema, "empty lambda grid");
    return out;
}

ProblemSpec load_spec(const RunConfig& cfg) {
    if (!cfg.fixture.empty()) {
        if (!is_fixture_name(cfg.fixture))
            fail(ErrorKind::Schema, "unknown fixture '" + cfg.fixture + "'");
        return fixture(cfg.fixture);
    }
    if (cfg.file.empty())
        fail(ErrorKind::Schema, "no problem file or fixture given");
    std::ifstream in(cfg.file);
    if (!in) fail(ErrorKind::Schema, "cannot open '" + cfg.file + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_problem(buffer.str());
}

json config_json(const RunConfig& cfg) {
    json j;
    j["subcommand"] = cfg.subcommand;
    j["fixture"] = cfg.fixture;
    j["file"] = cfg.file;
    j["format"] = cfg.format;
    j["target"] = cfg.target;
    j["given"] = cfg.given;
    j["family"] = cfg.family;
    j["kv"] = cfg.kv;
    j["kw"] = cfg.kw;
    j["lambdas"] = cfg.lambdas;
    j["restarts"] = cfg.restarts;
    j["seed"] = cfg.seed;
    j["vertex_cap"] = cfg.vertex_cap;
    j["budget"] = cfg.budget;
    j["seeds"] = cfg.seeds;
    j["directions"] = cfg.directions;
    j["tol"] = cfg.tol;
    j["region_kind"] = cfg.region_kind;
    j["wrt"] = cfg.wrt;
    j["joint_graph"] = cfg.joint_graph;
    j["sets_mode"] = cfg.sets_mode;
    j["multisets_k"] = cfg.multisets_k;
    j["dominated"] = cfg.dominated;
    j["pad"] = cfg.pad;
    j["emit"] = cfg.emit;
    j["oracle_resolution"] = cfg.oracle_resolution;
    j["compare_a"] = cfg.compare_a;
    j["compare_b"] = cfg.compare_b;
    return j;
}

json problem_json(const ProblemSpec& spec) {
    json j;
    j["description"] = spec.description;
    j["sizes"] = {{"X", spec.nx()}, {"Y", spec.ny()}, {"Z", spec.nz()},
                  {"F", spec.nf()}};
    json pruned = json::array();
    for (const auto& rec : spec.pruned)
        pruned.push_back({{"role", role_name(rec.role)}, {"symbol", rec.symbol}});
    j["pruned"] = pruned;
    return j;
}

json channel_json(const Channel& ch, const std::vector<std::string>& labels) {
    json j;
    json masks = json::array();
    for (const Bitset& m : ch.masks) masks.push_back(m.to_string(labels));
    j["masks"] = masks;
    json rows = json::array();
    for (const auto& row : ch.rows) rows.push_back(row);
    j["rows"] = rows;
    return j;
}

json graph_json(const CharGraph& g) {
    json j;
    j["vertices"] = g.vertices;
    json edges = json::array();
    for (auto [a, b] : g.edges())
        edges.push_back({g.vertices[size_t(a)], g.vertices[size_t(b)]});
    j["edges"] = edges;
    j["provenance"] = g.provenance;
    return j;
}

json region_json(const RateRegion& region, const std::vector<double>& lambdas) {
    json j;
    j["name"] = region.name;
    j["kind"] = region.kind;

    std::map<std::string, int> candidate_ids;
    for (const auto& t : region.triples)
        candidate_ids.emplace(t.candidate, 0);
    int next_id = 0;
    for (auto& [label, id] : candidate_ids) id = next_id++;

    json triples = json::array();
    for (const auto& t : region.triples) {
        json entry = {{"a", t.a},
                      {"b", t.b},
                      {"s", t.s},
                      {"candidate_id", candidate_ids[t.candidate]},
                      {"lambda", t.lambda}};
        if (!t.chan_v_rows.empty()) entry["chan_v"] = t.chan_v_rows;
        if (!t.chan_w_rows.empty()) entry["chan_w"] = t.chan_w_rows;
        triples.push_back(entry);
    }
    j["triples"] = triples;
    json cands = json::array();
    for (const auto& [label, id] : candidate_ids)
        cands.push_back({{"id", id}, {"label", label}});
    j["candidates"] = cands;
    json boundary = json::array();
    for (auto [rx, ry] : region.boundary(lambdas)) boundary.push_back({rx, ry});
    j["boundary"] = boundary;
    j["min_rx"] = region.min_rx();
    j["min_ry"] = region.min_ry();
    return j;
}

std::string region_csv(const RateRegion& region, const std::vector<double>& lambdas) {
    std::map<std::string, int> candidate_ids;
    for (const auto& t : region.triples) candidate_ids.emplace(t.candidate, 0);
    int next_id = 0;
    for (auto& [label, id] : candidate_ids) id = next_id++;

    std::string out = "lambda,R_X,R_Y,mode,candidate_id\n";
    for (double lam : lambdas) {
        double best = std::numeric_limits<double>::infinity();
        const RegionTriple* arg = nullptr;
        for (const auto& t : region.triples) {
            double lo = std::max(t.a, t.s - t.b) + lam * t.b;
            double hi = t.a + lam * std::max(t.b, t.s - t.a);
            double v = std::min(lo, hi);
            if (v < best) { best = v; arg = &t; }
        }
        if (!arg) continue;
        double rx, ry;
        if (lam <= 1.0) { rx = arg->a; ry = std::max(arg->b, arg->s - arg->a); }
        else { rx = std::max(arg->a, arg->s - arg->b); ry = arg->b; }
        out += format_double(lam) + "," + format_double(rx) + "," +
               format_double(ry) + "," + region.name + "," +
               std::to_string(candidate_ids[arg->candidate]) + "\n";
    }
    return out;
}

RateRegion region_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Schema, "cannot open region file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(ErrorKind::Schema, std::string("region file parse failure: ") + e.what());
    }
    RateRegion region;
    region.name = doc.value("name", path);
    region.kind = doc.value("kind", "");
    if (!doc.contains("triples") || !doc["triples"].is_array())
        fail(ErrorKind::Schema, "region file has no triples");
    for (const auto& t : doc["triples"]) {
        RegionTriple rt;
        rt.a = t.at("a").get<double>();
        rt.b = t.at("b").get<double>();
        rt.s = t.at("s").get<double>();
        rt.lambda = t.value("lambda", 0.0);
        rt.candidate = "candidate#" + std::to_string(t.value("candidate_id", 0));
        region.triples.push_back(rt);
    }
    return region;
}

SolverOptions solver_options(const RunConfig& cfg, int default_restarts) {
    SolverOptions opts;
    opts.restarts = cfg.restarts > 0 ? cfg.restarts : default_restarts;
    opts.seed = cfg.seed;
    return opts;
}

RegionOptions region_options(const RunConfig& cfg) {
    RegionOptions opts;
    opts.mode = parse_family_choice(cfg.family);
    opts.kv = cfg.kv;
    opts.kw = cfg.kw;
    opts.lambdas = parse_lambdas(cfg.lambdas);
    opts.solver = solver_options(cfg, 32);
    opts.max_candidates = cfg.budget;
    opts.vertex_cap = cfg.vertex_cap;
    return opts;
}

json compare_json(const CompareReport& rep) {
    json j;
    j["a_subset_b"] = rep.a_subset_b;
    j["b_subset_a"] = rep.b_subset_a;
    j["min_diff"] = rep.min_diff;
    j["max_diff"] = rep.max_diff;
    j["witness_min"] = std::isinf(rep.witness_min) ? -1.0 : rep.witness_min;
    j["witness_max"] = std::isinf(rep.witness_max) ? -1.0 : rep.witness_max;
    j["tol"] = rep.tol;
    return j;
}

json run_subcommand(const RunConfig& cfg) {
    json result;

    if (cfg.subcommand == "compare") {
        RateRegion a = region_from_json(cfg.compare_a);
        RateRegion b = region_from_json(cfg.compare_b);
        result["compare"] = compare_json(
            region_compare(a, b, cfg.directions, cfg.tol));
        result["a"] = a.name;
        result["b"] = b.name;
        return result;
    }

    ProblemSpec spec = load_spec(cfg);
    result["problem"] = problem_json(spec);

    if (cfg.subcommand == "validate") {
        result["valid"] = true;
        result["conditionally_independent"] = check_conditional_independence(spec);
        result["partially_invertible_X"] = check_partially_invertible(spec, Role::X);
        result["partially_invertible_Y"] = check_partially_invertible(spec, Role::Y);
        GraphEqualityHypotheses h = graph_equality_hypotheses(spec);
        result["graph_equality_hypotheses"] = {{"full_support", h.full_support},
                                       {"complete_graph", h.complete_graph},
                                       {"cond_independent", h.cond_independent}};
        if (cfg.emit) result["document"] = json::parse(problem_to_json(spec));
        return result;
    }

    if (cfg.subcommand == "graph") {
        if (cfg.joint_graph) {
            result["graph"] = graph_json(build_joint_char_graph(spec, cfg.vertex_cap));
        } else {
            Role target = role_from_name(cfg.target);
            RoleSet given = parse_given(cfg.given, target);
            result["graph"] =
                graph_json(build_char_graph(spec, target, given, cfg.vertex_cap));
        }
        return result;
    }

    if (cfg.subcommand == "sets") {
        Role target = role_from_name(cfg.target);
        RoleSet given = parse_given(cfg.given, target);
        CharGraph g = cfg.joint_graph ? build_joint_char_graph(spec, cfg.vertex_cap)
                                      : build_char_graph(spec, target, given,
                                                         cfg.vertex_cap);
        const auto& labels = g.vertices;
        if (cfg.sets_mode == "maximal") {
            result["family"] = maximal_independent_sets(g).to_strings(labels);
        } else if (cfg.sets_mode == "all") {
            result["family"] = independent_sets(g).to_strings(labels);
        } else if (cfg.sets_mode == "multisets") {
            int k = cfg.multisets_k > 0 ? cfg.multisets_k : g.n() + 1;
            Bitset cover(g.n());
            for (int i = 0; i < g.n(); ++i) cover.set(i);
            MultisetOptions mopts;
            mopts.total = k;
            mopts.drop_dominated = cfg.dominated;
            mopts.pad_to_total = cfg.pad;
            json families = json::array();
            for (const MultiFamily& mf :
                 multisets(independent_sets(g), cover, mopts))
                families.push_back(mf.to_strings(labels));
            result["families"] = families;
            result["count"] = families.size();
        } else {
            fail(ErrorKind::Schema, "unknown sets mode '" + cfg.sets_mode + "'");
        }
        return result;
    }

    if (cfg.subcommand == "entropy") {
        Role target = role_from_name(cfg.target);
        RoleSet given = parse_given(cfg.given, target);
        FamilyChoice mode = parse_family_choice(cfg.family);
        SolveReport rep = conditional_graph_entropy(
            spec, target, given, mode, solver_options(cfg, 8), cfg.vertex_cap);
        result["value"] = rep.value;
        result["family"] = rep.family.to_strings(spec.alphabet(target));
        result["channel"] = channel_json(rep.argmin, spec.alphabet(target));
        result["iterations"] = rep.iterations;
        result["converged"] = rep.converged;
        result["restarts"] = rep.restarts_used;
        result["restart_spread"] = rep.restart_spread;
        result["families_tried"] = rep.families_tried;
        if (cfg.oracle_resolution > 0) {
            CharGraph g = build_char_graph(spec, target, given, cfg.vertex_cap);
            OracleResult oracle = grid_oracle_entropy(
                target_context_matrix(spec, target, given),
                rep.argmin.masks, cfg.oracle_resolution);
            result["oracle"] = {{"value", oracle.value},
                                {"gap", oracle.gap},
                                {"points", oracle.points}};
        }
        return result;
    }

    if (cfg.subcommand == "inner" || cfg.subcommand == "outer" ||
        cfg.subcommand == "region") {
        std::string kind = cfg.subcommand == "region" ? cfg.region_kind
                                                      : cfg.subcommand;
        if (kind.empty())
            fail(ErrorKind::Schema,
                 "region needs one of --inner/--outer/--independent/"
                 "--partially-invertible/--sw/--km");
        RegionOptions opts = region_options(cfg);
        RateRegion region;
        if (kind == "inner") region = inner_bound_region(spec, opts);
        else if (kind == "outer") region = outer_bound_region(spec, opts);
        else if (kind == "independent") region = independent_sources_region(spec, opts);
        else if (kind == "partially-invertible")
            region = partially_invertible_region(spec, role_from_name(cfg.wrt), opts);
        else if (kind == "sw") region = slepian_wolf_region(spec);
        else if (kind == "km") region = korner_marton_region(spec);
        else fail(ErrorKind::Schema, "unknown region kind '" + kind + "'");
        result["region"] = region_json(region, opts.lambdas);
        return result;
    }

    if (cfg.subcommand == "laws") {
        int pass_zero = 0, pass_support = 0, abstained = 0;
        double max_drift = 0.0;
        for (int s = 0; s < cfg.seeds; ++s) {
            JointWitness w =
                random_admissible_witness(spec, mix_seed(cfg.seed, uint64_t(s)));
            if (zero_error_check(spec, w).value()) pass_zero++;
            SupportEquivalenceReport rep = support_equivalence_check(spec, w);
            if (rep.abstained) abstained++;
            else if (rep.all_ok()) pass_support++;
            max_drift = std::max(max_drift,
                                 support_relabel_drift(spec, w.chanV, w.chanW));
        }
        OrderEquivalenceReport orders =
            check_condition_orders(spec, cfg.kv, cfg.kw, cfg.budget);
        result["witnesses"] = cfg.seeds;
        result["zero_error_pass"] = pass_zero;
        result["support_equivalence_pass"] = pass_support;
        result["abstained"] = abstained;
        result["max_relabel_drift"] = max_drift;
        result["order_equivalence"] = {
            {"candidates_v_first", orders.candidates_v_first},
            {"candidates_w_first", orders.candidates_w_first},
            {"agreed", orders.agreed},
            {"all_agree", orders.all_agree}};
        result["pass"] = pass_zero == cfg.seeds && pass_support == cfg.seeds &&
                         abstained == 0 && orders.all_agree &&
                         max_drift <= 1e-12;
        return result;
    }

    fail(ErrorKind::Schema, "unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace

RunResult run(const RunConfig& cfg) {
    RunResult res;
    try {
        json result = run_subcommand(cfg);

        if (cfg.format == "csv") {
            if (!result.contains("region"))
                fail(ErrorKind::Schema, "csv output is only defined for regions");
            RateRegion region;
            region.name = result["region"]["name"].get<std::string>();
            std::map<int, std::string> id_to_label;
            for (const auto& c : result["region"]["candidates"])
                id_to_label[c["id"].get<int>()] = c["label"].get<std::string>();
            for (const auto& t : result["region"]["triples"]) {
                RegionTriple rt;
                rt.a = t["a"].get<double>();
                rt.b = t["b"].get<double>();
                rt.s = t["s"].get<double>();
                rt.lambda = t["lambda"].get<double>();
                rt.candidate = id_to_label[t["candidate_id"].get<int>()];
                region.triples.push_back(rt);
            }
            res.output = region_csv(region, parse_lambdas(cfg.lambdas));
        } else {
            json report;
            report["command"] = cfg.subcommand;
            report["config"] = config_json(cfg);
            report["result"] = result;
            res.output = report.dump(2) + "\n";
        }
        res.exit_code = 0;
    } catch (const Error& e) {
        json report;
        report["command"] = cfg.subcommand;
        report["config"] = config_json(cfg);
        report["error"] = {{"kind", error_kind_name(e.kind())},
                           {"message", e.what()}};
        res.output = report.dump(2) + "\n";
        res.exit_code = e.is_budget_class() ? 2 : 1;
    } catch (const std::exception& e) {
        json report;
        report["command"] = cfg.subcommand;
        report["error"] = {{"kind", "InternalError"}, {"message", e.what()}};
        res.output = report.dump(2) + "\n";
        res.exit_code = 1;
    }

    if (!cfg.out.empty()) {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) {
            res.output += "\ncannot write to '" + cfg.out + "'\n";
            res.exit_code = res.exit_code == 0 ? 1 : res.exit_code;
        } else {
            out << res.output;
        }
    }
    return res;
}

} // namespace fncomp
