#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "txpar/conflict_graph.hpp"
#include "txpar/synth.hpp"

using namespace txpar;

namespace {

SynthParams small(std::uint64_t seed) {
    SynthParams p;
    p.blocks = 40;
    p.txs_per_block = 30;
    p.seed = seed;
    return p;
}

double mean_largest_component(const SynthParams& p) {
    double sum = 0;
    for (const auto& b : generate(p)) sum += static_cast<double>(largest_cluster_metric(build_conflict_graph(b)).largest_component_size);
    return sum / static_cast<double>(p.blocks);
}

}  // namespace

TEST_CASE("same params and seed give byte-identical traces") {
    const auto a = to_jsonl(generate(small(7)));
    const auto b = to_jsonl(generate(small(7)));
    CHECK(a == b);
    CHECK(!a.empty());
}

TEST_CASE("blocks can be generated independently and in any order") {
    const SyntheticTraceGenerator gen(small(3));
    const auto all = gen.generate();
    for (std::uint64_t k = all.size(); k-- > 0;) CHECK(gen.block(k) == all[k]);
    CHECK(all.front().block_number == 1);
    CHECK(all.back().block_number == 40);
}

TEST_CASE("distinct seeds give distinct traces") {
    const std::hash<std::string> h;
    for (std::uint64_t s = 1; s <= 10; ++s) CHECK(h(to_jsonl(generate(small(s)))) != h(to_jsonl(generate(small(s + 100)))));
}

TEST_CASE("records satisfy the trace invariants and the gas clip") {
    SynthParams p = small(5);
    p.gas_sigma = 3.0;  // push plenty of draws past both clip bounds
    std::set<Gas> seen;
    std::size_t txs = 0;
    for (const auto& b : generate(p)) {
        CHECK(validate_block(b).empty());
        CHECK(b.size() >= 1);
        txs += b.size();
        for (const auto& tx : b.transactions) {
            CHECK(tx.gas_used >= 21000);
            CHECK(tx.gas_used <= 8000000);
            CHECK(tx.accounts.size() >= 1);
            seen.insert(tx.gas_used);
        }
    }
    CHECK(seen.contains(21000));
    CHECK(seen.contains(8000000));
    // Poisson mean 30 over 40 blocks: sd of the total is sqrt(1200) ~ 35.
    CHECK(std::abs(static_cast<double>(txs) - 1200.0) < 5 * 35.0);
}

TEST_CASE("no contract calls and no extras over a huge user pool is near edgeless") {
    SynthParams p;
    p.blocks = 300;
    p.txs_per_block = 100;
    p.p_contract_call = 0.0;
    p.extra_touch_p = 0.0;
    p.users = 100000;
    p.seed = 17;
    // Each access list is {from, to}, both uniform over U users. Two lists
    // share an account with probability at most 4/U (union bound over the
    // four cross pairs).
    const double expected_density = 4.0 / static_cast<double>(p.users);
    double edges = 0, pairs = 0;
    for (const auto& b : generate(p)) {
        const auto g = build_conflict_graph(b);
        edges += static_cast<double>(g.edges().size());
        pairs += static_cast<double>(b.size() * (b.size() - 1) / 2);
    }
    CHECK(edges / pairs < 5.0 * expected_density);
}

TEST_CASE("a single hot contract called by everyone makes one component") {
    SynthParams p = small(9);
    p.hot_contracts = 1;
    p.p_contract_call = 1.0;
    for (const auto& b : generate(p)) CHECK(build_conflict_graph(b).component_count() == 1);
}

TEST_CASE("raising p_contract_call does not shrink the largest component") {
    SynthParams p;
    p.blocks = 200;
    p.txs_per_block = 60;
    p.seed = 23;
    double previous = 0.0;
    for (const double prob : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        p.p_contract_call = prob;
        std::vector<double> sizes;
        for (const auto& b : generate(p)) {
            sizes.push_back(static_cast<double>(largest_cluster_metric(build_conflict_graph(b)).largest_component_size));
        }
        double mean = 0, var = 0;
        for (const double s : sizes) mean += s;
        mean /= static_cast<double>(sizes.size());
        for (const double s : sizes) var += (s - mean) * (s - mean);
        const double se = std::sqrt(var / static_cast<double>(sizes.size() - 1) / static_cast<double>(sizes.size()));
        CHECK(mean >= previous - 3.0 * se);
        previous = mean;
    }
    p.p_contract_call = 0.9;
    CHECK(mean_largest_component(p) > 1.0);
}

TEST_CASE("parameter validation") {
    auto bad = [](auto mutate) {
        SynthParams p;
        mutate(p);
        CHECK_THROWS_AS(p.validate(), InvalidParams);
    };
    bad([](SynthParams& p) { p.p_contract_call = 1.5; });
    bad([](SynthParams& p) { p.extra_touch_p = -0.1; });
    bad([](SynthParams& p) { p.extra_touch_p = 1.0; });
    bad([](SynthParams& p) { p.users = 0; });
    bad([](SynthParams& p) { p.hot_contracts = 0; });
    bad([](SynthParams& p) { p.zipf_s = 0.0; });
    bad([](SynthParams& p) { p.txs_per_block = 0.0; });
    bad([](SynthParams& p) { p.gas_min = 10; p.gas_max = 5; });
    CHECK_NOTHROW(SynthParams{}.validate());
    CHECK_THROWS_AS(SyntheticTraceGenerator(SynthParams{.zipf_s = -1.0}), InvalidParams);
}

TEST_CASE("JSON config") {
    SynthParams p;
    p.seed = 42;
    p.zipf_s = 1.7;
    p.users = 55;
    CHECK(parse_synth_config(to_json(p)) == p);

    const auto partial = parse_synth_config(R"({"seed": 9, "p_contract_call": 0.25})");
    CHECK(partial.seed == 9);
    CHECK(partial.p_contract_call == 0.25);
    CHECK(partial.users == SynthParams{}.users);

    CHECK_THROWS_AS(parse_synth_config(R"({"sed": 9})"), InvalidParams);
    CHECK_THROWS_AS(parse_synth_config(R"({"seed": -1})"), InvalidParams);
    CHECK_THROWS_AS(parse_synth_config(R"({"zipf_s": "big"})"), InvalidParams);
    CHECK_THROWS_AS(parse_synth_config(R"({"p_contract_call": 2})"), InvalidParams);
    CHECK_THROWS_AS(parse_synth_config("[1]"), InvalidParams);
    CHECK_THROWS_AS(parse_synth_config("{"), InvalidParams);
}

TEST_CASE("synthetic accounts are distinct per pool and index") {
    CHECK(synthetic_user(1) != synthetic_user(2));
    CHECK(synthetic_user(1) != synthetic_contract(1));
    CHECK(synthetic_contract(3) == synthetic_contract(3));
}
