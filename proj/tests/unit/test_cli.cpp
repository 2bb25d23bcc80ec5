#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "txpar/cli.hpp"
#include "txpar/report.hpp"
#include "txpar/trace.hpp"

namespace fs = std::filesystem;
using namespace txpar;

namespace {

fs::path tmp_dir() {
    const char* env = std::getenv("TXPAR_TEST_TMP");
    fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "txpar_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string path(const std::string& name) { return (tmp_dir() / name).string(); }

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "txpar");
    return cli::run(args);
}

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string& file, const std::string& text) { std::ofstream(file, std::ios::binary) << text; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

const char* const small_trace =
    R"({"hash":"0x0000000000000000000000000000000000000000000000000000000000000001","block":7,"index":0,"gasUsed":10,"accounts":["0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa"]})"
    "\n"
    R"({"hash":"0x0000000000000000000000000000000000000000000000000000000000000002","block":7,"index":1,"gasUsed":20,"accounts":["0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa","0xbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb"]})"
    "\n"
    R"({"hash":"0x0000000000000000000000000000000000000000000000000000000000000003","block":7,"index":2,"gasUsed":5,"accounts":["0xcccccccccccccccccccccccccccccccccccccccc"]})"
    "\n";

}  // namespace

TEST_CASE("generate is deterministic and parses back") {
    const auto a = path("gen_a.jsonl"), b = path("gen_b.jsonl"), c = path("gen_c.jsonl");
    REQUIRE(run({"generate", "--seed", "9", "--blocks", "20", "--out", a}) == cli::exit_ok);
    REQUIRE(run({"generate", "--seed", "9", "--blocks", "20", "--out", b}) == cli::exit_ok);
    REQUIRE(run({"generate", "--seed", "10", "--blocks", "20", "--out", c}) == cli::exit_ok);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));

    std::ifstream in(a);
    const auto blocks = parse_trace(in);
    REQUIRE(blocks.size() == 20);
    CHECK(blocks.front().block_number == 1);
    for (const auto& blk : blocks) CHECK(validate_block(blk).empty());

    // Round trip through the writer is byte-identical.
    CHECK(to_jsonl(blocks) == slurp(a));
}

TEST_CASE("generate reads a config and flags override it") {
    const auto cfg = path("gen.json"), a = path("gen_cfg.jsonl"), b = path("gen_flag.jsonl");
    spit(cfg, R"({"seed": 3, "blocks": 4, "first_block": 100, "txs_per_block": 10})");
    REQUIRE(run({"generate", "--config", cfg, "--out", a}) == cli::exit_ok);
    REQUIRE(run({"generate", "--config", cfg, "--blocks", "2", "--out", b}) == cli::exit_ok);
    std::ifstream in(a);
    const auto blocks = parse_trace(in);
    REQUIRE(blocks.size() == 4);
    CHECK(blocks[0].block_number == 100);
    CHECK(slurp(a).starts_with(slurp(b)));

    spit(cfg, R"({"seed": 3, "colour": 1})");
    CHECK(run({"generate", "--config", cfg, "--out", a}) == cli::exit_input);
    CHECK(run({"generate", "--extra-touch-p", "1.0", "--out", a}) == cli::exit_input);
}

TEST_CASE("simulate is deterministic across job counts") {
    const auto trace = path("sim.jsonl");
    REQUIRE(run({"generate", "--seed", "5", "--blocks", "70", "--out", trace}) == cli::exit_ok);
    const auto one = path("sim_j1.csv"), eight = path("sim_j8.csv"), again = path("sim_j1b.csv");
    REQUIRE(run({"simulate", "--input", trace, "--cap", "32", "--jobs", "1", "--out", one}) == cli::exit_ok);
    REQUIRE(run({"simulate", "--input", trace, "--cap", "32", "--jobs", "8", "--out", eight}) == cli::exit_ok);
    REQUIRE(run({"simulate", "--input", trace, "--cap", "32", "--jobs", "1", "--out", again}) == cli::exit_ok);
    CHECK(slurp(one) == slurp(eight));
    CHECK(slurp(one) == slurp(again));

    const auto rows = lines(slurp(one));
    REQUIRE(rows.size() == 73);
    CHECK(rows[0] == "# threads=8");
    CHECK(rows[1] == "# cap=32 simple_variant=prefix heft=insertion-eft");
    CHECK(rows[2] + "\n" == csv_header());
    CHECK(rows[3].starts_with("1,"));
}

TEST_CASE("frozen golden files") {
    const std::string dir = TXPAR_FIXTURES;
    const auto trace = path("golden_trace.jsonl"), out = path("golden_report.csv");
    REQUIRE(run({"generate", "--seed", "7", "--blocks", "6", "--txs-per-block", "25", "--hot-contracts", "20",
                 "--out", trace}) == cli::exit_ok);
    CHECK(slurp(trace) == slurp(dir + "/golden_trace.jsonl"));
    REQUIRE(run({"simulate", "--input", dir + "/golden_trace.jsonl", "--threads", "4", "--cap", "8", "--out", out}) ==
            cli::exit_ok);
    CHECK(slurp(out) == slurp(dir + "/golden_report.csv"));
}

TEST_CASE("simulate golden output on a small trace") {
    const auto trace = path("small.jsonl"), out = path("small.csv");
    spit(trace, small_trace);
    REQUIRE(run({"simulate", "--input", trace, "--threads", "2", "--out", out}) == cli::exit_ok);
    CHECK(slurp(out) ==
          "# threads=2\n# cap=none simple_variant=prefix heft=insertion-eft\n" + csv_header() +
              "7,3,35,2,none,prefix,30,1.16667,30,1.16667,0.583333,30,1.16667,0.583333\n");

    REQUIRE(run({"simulate", "--input", trace, "--threads", "2", "--format", "json", "--strategies", "heft", "--out",
                 out}) == cli::exit_ok);
    CHECK(slurp(out) ==
          R"({"block":7,"tx_count":3,"total_gas":35,"threads":2,"cap":"none","simple_variant":"prefix",)"
          R"("heft":{"makespan":30,"speedup":1.16667,"utilization":0.583333}})"
          "\n");
}

TEST_CASE("simulate dumps components and schedules") {
    const auto trace = path("small_dump.jsonl"), out = path("dump.csv"), comps = path("comps.jsonl"),
               scheds = path("scheds.jsonl");
    spit(trace, small_trace);
    REQUIRE(run({"simulate", "--input", trace, "--threads", "2", "--out", out, "--dump-components", comps,
                 "--dump-schedules", scheds}) == cli::exit_ok);
    CHECK(slurp(comps) == "{\"block\":7,\"components\":[[0,1],[2]]}\n");
    const auto rows = lines(slurp(scheds));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].starts_with(R"({"block":7,"strategy":"simple","chunk":0,"first_tx":0,"rows":)"));
    CHECK(rows[1].starts_with(R"({"block":7,"strategy":"heft","chunk":0,"first_tx":0,"rows":)"));
}

TEST_CASE("simulate windowed aggregate") {
    const auto trace = path("agg.jsonl"), out = path("agg.csv"), agg = path("agg_windows.csv");
    REQUIRE(run({"generate", "--seed", "2", "--blocks", "10", "--out", trace}) == cli::exit_ok);
    CHECK(run({"simulate", "--input", trace, "--window", "4", "--out", out}) == cli::exit_usage);
    REQUIRE(run({"simulate", "--input", trace, "--window", "4", "--out", out, "--aggregate-out", agg}) ==
            cli::exit_ok);
    const auto rows = lines(slurp(agg));
    REQUIRE(rows.size() == 2 + 1 + 3);
    CHECK(rows[2] + "\n" == aggregate_csv_header());
    CHECK(rows[3].starts_with("1,4,"));
    CHECK(rows[5].starts_with("9,12,2,"));
}

TEST_CASE("input errors map to exit code 2") {
    const auto bad = path("bad.jsonl"), out = path("bad.csv");
    spit(bad, "{\"hash\":\"0x01\"}\n");
    CHECK(run({"simulate", "--input", bad, "--out", out}) == cli::exit_input);
    CHECK(run({"simulate", "--input", path("missing.jsonl"), "--out", out}) == cli::exit_input);

    // gasUsed 0 is rejected unless lenient.
    std::string zero = small_trace;
    zero.replace(zero.find("\"gasUsed\":5"), 11, "\"gasUsed\":0");
    spit(bad, zero);
    CHECK(run({"simulate", "--input", bad, "--out", out}) == cli::exit_input);
    CHECK(run({"simulate", "--input", bad, "--out", out, "--lenient"}) == cli::exit_ok);

    // Duplicate index within a block.
    std::string dup = small_trace;
    dup.replace(dup.find("\"index\":2"), 9, "\"index\":1");
    spit(bad, dup);
    CHECK(run({"simulate", "--input", bad, "--out", out}) == cli::exit_input);
    CHECK(run({"validate", "--input", bad}) == cli::exit_input);
}

TEST_CASE("usage errors map to exit code 1") {
    CHECK(run({}) == cli::exit_usage);
    CHECK(run({"simulate"}) == cli::exit_usage);
    CHECK(run({"simulate", "--input", "x", "--threads", "0"}) == cli::exit_usage);
    CHECK(run({"simulate", "--input", "x", "--format", "xml"}) == cli::exit_usage);
    CHECK(run({"simulate", "--input", "x", "--simple-variant", "greedy"}) == cli::exit_usage);
    CHECK(run({"frobnicate"}) == cli::exit_usage);
    CHECK(run({"--help"}) == cli::exit_ok);
}

TEST_CASE("validate and oracle-check") {
    const auto trace = path("valid.jsonl");
    spit(trace, small_trace);
    CHECK(run({"validate", "--input", trace}) == cli::exit_ok);

    const auto tiny = path("tiny.jsonl"), out = path("oracle.csv");
    REQUIRE(run({"generate", "--seed", "5", "--blocks", "12", "--txs-per-block", "3", "--hot-contracts", "3",
                 "--out", tiny}) == cli::exit_ok);
    REQUIRE(run({"oracle-check", "--input", tiny, "--threads", "2", "--out", out}) == cli::exit_ok);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 14);
    CHECK(rows[0] == "# threads=2");
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(rows[i].ends_with(",ok"));
        std::vector<std::uint64_t> v;
        std::istringstream cells(rows[i]);
        for (std::string cell; std::getline(cells, cell, ',') && v.size() < 5;) v.push_back(std::stoull(cell));
        CHECK(v[3] >= v[2]);
        CHECK(v[4] >= v[2]);
    }

    CHECK(run({"oracle-check", "--input", trace, "--threads", "4", "--out", out}) == cli::exit_input);
}
