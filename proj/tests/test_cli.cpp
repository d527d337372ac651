#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "fncomp/cli.hpp"

using namespace fncomp;

TEST_CASE("reports are byte-identical across runs") {
    RunConfig cfg;
    cfg.subcommand = "entropy";
    cfg.fixture = "ex3";
    cfg.target = "X";
    cfg.given = "Y,Z";
    cfg.family = "maximal";
    cfg.restarts = 4;
    cfg.seed = 42;
    RunResult a = run(cfg);
    RunResult b = run(cfg);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    RunConfig region;
    region.subcommand = "region";
    region.region_kind = "partially-invertible";
    region.fixture = "ex4";
    region.lambdas = "0.5,1,2";
    region.restarts = 4;
    region.seed = 9;
    RunResult c = run(region);
    RunResult d = run(region);
    CHECK(c.exit_code == 0);
    CHECK(c.output == d.output);
}

TEST_CASE("hypothesis failures exit with code 1") {
    RunConfig cfg;
    cfg.subcommand = "region";
    cfg.region_kind = "independent";
    cfg.fixture = "ex2:0.75";
    RunResult res = run(cfg);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("HypothesisError") != std::string::npos);
}

TEST_CASE("budget and size failures exit with code 2") {
    RunConfig cfg;
    cfg.subcommand = "graph";
    cfg.fixture = "ex3";
    cfg.joint_graph = true;
    cfg.vertex_cap = 4;
    RunResult res = run(cfg);
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("SizeError") != std::string::npos);

    RunConfig tight;
    tight.subcommand = "inner";
    tight.fixture = "ex4";
    tight.family = "multiset";
    tight.budget = 1;
    tight.lambdas = "1";
    tight.restarts = 2;
    RunResult res2 = run(tight);
    CHECK(res2.exit_code == 2);
    CHECK(res2.output.find("BudgetExceeded") != std::string::npos);
}

TEST_CASE("unknown inputs exit with code 1") {
    RunConfig cfg;
    cfg.subcommand = "validate";
    cfg.fixture = "ex99";
    CHECK(run(cfg).exit_code == 1);

    RunConfig nofile;
    nofile.subcommand = "validate";
    CHECK(run(nofile).exit_code == 1);
}

TEST_CASE("entropy run reports the edge-rule value for ex3") {
    RunConfig cfg;
    cfg.subcommand = "entropy";
    cfg.fixture = "ex3";
    cfg.target = "X";
    cfg.given = "Y,Z";
    cfg.restarts = 4;
    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    // log2(3) = 1.5849625007211563: every conditional support window is a
    // triangle of G_{X|Y,Z}, so V determines X given (Y,Z).
    CHECK(res.output.find("1.58496250") != std::string::npos);
}

TEST_CASE("csv region output has the documented shape") {
    RunConfig cfg;
    cfg.subcommand = "region";
    cfg.region_kind = "sw";
    cfg.fixture = "ex2:0.75";
    cfg.format = "csv";
    cfg.lambdas = "0.5,1,2";
    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("lambda,R_X,R_Y,mode,candidate_id\n", 0) == 0);
    int newlines = 0;
    for (char ch : res.output)
        if (ch == '\n') ++newlines;
    CHECK(newlines == 4); // header + one row per lambda
    CHECK(res.output.find('\r') == std::string::npos); // LF endings
}

TEST_CASE("validate --emit round-trips through a file") {
    RunConfig cfg;
    cfg.subcommand = "validate";
    cfg.fixture = "ex4";
    cfg.emit = true;
    cfg.out = "cli_test_emit.json";
    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    std::ifstream in(cfg.out);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == res.output);
    std::remove(cfg.out.c_str());
}

TEST_CASE("compare subcommand consumes region dumps") {
    RunConfig make_sw;
    make_sw.subcommand = "region";
    make_sw.region_kind = "sw";
    make_sw.fixture = "ex2:0.75";
    make_sw.out = "cli_test_sw.json";
    make_sw.lambdas = "1";
    REQUIRE(run(make_sw).exit_code == 0);

    RunConfig make_km = make_sw;
    make_km.region_kind = "km";
    make_km.out = "cli_test_km.json";
    REQUIRE(run(make_km).exit_code == 0);

    // The region dump is nested under result.region; compare wants the bare
    // region object, so extract it first.
    for (const char* path : {"cli_test_sw.json", "cli_test_km.json"}) {
        std::ifstream in(path);
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        size_t result_at = content.find("\"result\"");
        REQUIRE(result_at != std::string::npos);
        size_t at = content.find("\"region\"", result_at);
        REQUIRE(at != std::string::npos);
        size_t open = content.find('{', at);
        int depth = 0;
        size_t end = open;
        for (size_t i = open; i < content.size(); ++i) {
            if (content[i] == '{') depth++;
            if (content[i] == '}' && --depth == 0) { end = i; break; }
        }
        std::ofstream outf(path, std::ios::binary);
        outf << content.substr(open, end - open + 1);
    }

    RunConfig cmp;
    cmp.subcommand = "compare";
    cmp.compare_a = "cli_test_sw.json";
    cmp.compare_b = "cli_test_km.json";
    cmp.tol = 1e-9;
    RunResult res = run(cmp);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"a_subset_b\": true") != std::string::npos);
    CHECK(res.output.find("\"b_subset_a\": false") != std::string::npos);
    std::remove("cli_test_sw.json");
    std::remove("cli_test_km.json");
}

TEST_CASE("laws subcommand reports a clean pass") {
    RunConfig cfg;
    cfg.subcommand = "laws";
    cfg.fixture = "ex4";
    cfg.seeds = 10;
    cfg.budget = 100000;
    RunResult res = run(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"pass\": true") != std::string::npos);
}
