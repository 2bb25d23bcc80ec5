#include "txpar/report.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "txpar/conflict_graph.hpp"
#include "txpar/dag.hpp"
#include "txpar/heft.hpp"
#include "txpar/schedule.hpp"

namespace txpar {

StrategySet parse_strategies(std::string_view text) {
    StrategySet set{false, false, false};
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        if (item == "lc" || item == "largest_cluster") set.largest_cluster = true;
        else if (item == "simple") set.simple = true;
        else if (item == "heft") set.heft = true;
        else throw InvalidParams("unknown strategy \"" + std::string(item) + "\"");
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    if (!set.largest_cluster && !set.simple && !set.heft) throw InvalidParams("no strategies selected");
    return set;
}

namespace {

void require_valid(const Schedule& schedule, const BlockTrace& chunk, const ConflictGraph& graph,
                   std::string_view strategy) {
    const auto violations = check_valid(schedule, chunk, graph);
    if (violations.empty()) return;
    throw InvariantViolation(fmt::format("{} produced an invalid schedule for block {}: {} ({} violations)",
                                         strategy, chunk.block_number, violations.front().describe(),
                                         violations.size()));
}

StrategyResult finish(const std::vector<Gas>& makespans, const BlockTrace& block, std::uint32_t threads,
                      bool with_utilization) {
    const auto m = metrics(combine_chunked(makespans), block, threads);
    StrategyResult r{m.makespan, m.speedup, std::nullopt};
    if (with_utilization) r.utilization = m.utilization;
    return r;
}

}  // namespace

BlockReport run_block(const BlockTrace& block, const RunConfig& config, std::vector<ChunkSchedule>* schedules) {
    if (config.threads == 0) throw InvalidParams("threads must be >= 1");
    if (config.cap && *config.cap == 0) throw InvalidParams("cap must be >= 1");

    BlockReport r;
    r.block_number = block.block_number;
    r.tx_count = block.size();
    r.total_gas = block.total_gas();
    r.threads = config.threads;
    r.cap = config.cap;
    r.simple_variant = config.simple_variant;
    if (block.empty()) {
        r.skipped = true;
        return r;
    }

    std::vector<Gas> lc, simple, heft;
    std::size_t chunk_index = 0;
    std::size_t offset = 0;
    auto keep = [&](const char* strategy, const Schedule& s) {
        if (schedules) schedules->push_back({strategy, chunk_index, offset, s});
    };
    auto evaluate = [&](const BlockTrace& part) {
        const auto graph = build_conflict_graph(part);
        if (config.strategies.largest_cluster) lc.push_back(largest_cluster_metric(graph).makespan);
        if (config.strategies.simple) {
            const auto s = simple_schedule(part, graph, config.threads, config.simple_variant);
            require_valid(s, part, graph, "simple");
            simple.push_back(s.makespan());
            keep("simple", s);
        }
        if (config.strategies.heft) {
            const auto s = heft_schedule(build_dag(part, graph), config.threads);
            require_valid(s, part, graph, "heft");
            heft.push_back(s.makespan());
            keep("heft", s);
        }
        ++chunk_index;
        offset += part.size();
    };

    if (config.cap && *config.cap < block.size()) {
        for (const auto& part : chunk(block, *config.cap)) evaluate(part);
    } else {
        evaluate(block);
    }

    if (config.strategies.largest_cluster) r.largest_cluster = finish(lc, block, config.threads, false);
    if (config.strategies.simple) r.simple = finish(simple, block, config.threads, true);
    if (config.strategies.heft) r.heft = finish(heft, block, config.threads, true);
    return r;
}

std::string cap_label(const std::optional<std::size_t>& cap) {
    return cap ? std::to_string(*cap) : std::string("none");
}

std::string format_ratio(double value) { return fmt::format("{:.6g}", value); }

std::string csv_preamble(const RunConfig& config) {
    return fmt::format("# threads={}\n# cap={} simple_variant={} heft=insertion-eft\n", config.threads,
                       cap_label(config.cap), to_string(config.simple_variant));
}

std::string csv_header() {
    return "block,tx_count,total_gas,threads,cap,simple_variant,lc_makespan,lc_speedup,simple_makespan,"
           "simple_speedup,simple_util,heft_makespan,heft_speedup,heft_util\n";
}

std::string csv_row(const BlockReport& r) {
    std::string row = fmt::format("{},{},{},{},{},{}", r.block_number, r.tx_count, r.total_gas, r.threads,
                                  cap_label(r.cap), to_string(r.simple_variant));
    auto cells = [&](const std::optional<StrategyResult>& s, bool with_util) {
        if (s) {
            row += fmt::format(",{},{}", s->makespan, format_ratio(s->speedup));
            if (with_util) row += "," + format_ratio(s->utilization.value_or(0.0));
        } else {
            row += with_util ? ",,," : ",,";
        }
    };
    cells(r.largest_cluster, false);
    cells(r.simple, true);
    cells(r.heft, true);
    row += '\n';
    return row;
}

std::string json_row(const BlockReport& r) {
    nlohmann::ordered_json j;
    j["block"] = r.block_number;
    j["tx_count"] = r.tx_count;
    j["total_gas"] = r.total_gas;
    j["threads"] = r.threads;
    j["cap"] = cap_label(r.cap);
    j["simple_variant"] = to_string(r.simple_variant);
    if (r.skipped) j["skipped"] = true;
    auto put = [&](const char* key, const std::optional<StrategyResult>& s) {
        if (!s) return;
        nlohmann::ordered_json o;
        o["makespan"] = s->makespan;
        // Formatted like the CSV so both outputs agree digit for digit.
        o["speedup"] = nlohmann::ordered_json::parse(format_ratio(s->speedup));
        if (s->utilization) o["utilization"] = nlohmann::ordered_json::parse(format_ratio(*s->utilization));
        j[key] = std::move(o);
    };
    put("largest_cluster", r.largest_cluster);
    put("simple", r.simple);
    put("heft", r.heft);
    return j.dump() + "\n";
}

void Aggregator::Sums::add(double speedup, double gas) {
    if (blocks == 0) {
        min = max = speedup;
    } else {
        min = std::min(min, speedup);
        max = std::max(max, speedup);
    }
    ++blocks;
    sum += speedup;
    weighted_sum += speedup * gas;
    weight += gas;
}

Aggregator::Aggregator(std::uint64_t window) : window_(window) {
    if (window == 0) throw InvalidParams("window must be >= 1");
}

void Aggregator::add(const BlockReport& report) {
    if (report.skipped) return;
    if (!anchor_) anchor_ = report.block_number;
    if (report.block_number < *anchor_) throw InvalidParams("aggregation input is not in block order");
    auto& w = windows_[(report.block_number - *anchor_) / window_];
    ++w.blocks;
    const auto gas = static_cast<double>(report.total_gas);
    if (report.largest_cluster) w.largest_cluster.add(report.largest_cluster->speedup, gas);
    if (report.simple) w.simple.add(report.simple->speedup, gas);
    if (report.heft) w.heft.add(report.heft->speedup, gas);
}

std::vector<AggregateReport> Aggregator::finish() const {
    auto summarize = [](const Sums& s) -> std::optional<StrategyAggregate> {
        if (s.blocks == 0) return std::nullopt;
        // Clamp against rounding so the means never leave [min, max].
        const double mean = std::clamp(s.sum / static_cast<double>(s.blocks), s.min, s.max);
        const double weighted = std::clamp(s.weighted_sum / s.weight, s.min, s.max);
        return StrategyAggregate{s.blocks, mean, weighted, s.min, s.max};
    };
    std::vector<AggregateReport> out;
    for (const auto& [key, w] : windows_) {
        AggregateReport a;
        a.window_start = *anchor_ + key * window_;
        a.window_end = a.window_start + window_ - 1;
        a.blocks = w.blocks;
        a.largest_cluster = summarize(w.largest_cluster);
        a.simple = summarize(w.simple);
        a.heft = summarize(w.heft);
        out.push_back(a);
    }
    return out;
}

std::vector<AggregateReport> aggregate(std::span<const BlockReport> reports, std::uint64_t window) {
    std::vector<const BlockReport*> sorted;
    sorted.reserve(reports.size());
    for (const auto& r : reports) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const BlockReport* a, const BlockReport* b) { return a->block_number < b->block_number; });
    Aggregator agg(window);
    for (const auto* r : sorted) agg.add(*r);
    return agg.finish();
}

std::string aggregate_csv_header() {
    return "window_start,window_end,blocks,lc_mean,lc_weighted_mean,simple_mean,simple_weighted_mean,"
           "heft_mean,heft_weighted_mean\n";
}

std::string aggregate_csv_row(const AggregateReport& a) {
    std::string row = fmt::format("{},{},{}", a.window_start, a.window_end, a.blocks);
    for (const auto* s : {&a.largest_cluster, &a.simple, &a.heft}) {
        if (*s) {
            row += fmt::format(",{},{}", format_ratio((*s)->mean), format_ratio((*s)->weighted_mean));
        } else {
            row += ",,";
        }
    }
    row += '\n';
    return row;
}

}  // namespace txpar
