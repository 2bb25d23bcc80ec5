#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "txpar/schedule.hpp"
#include "txpar/simple_scheduler.hpp"
#include "txpar/trace.hpp"

namespace txpar {

struct StrategySet {
    bool largest_cluster = true;
    bool simple = true;
    bool heft = true;

    friend bool operator==(const StrategySet&, const StrategySet&) = default;
};

/// Comma-separated subset of `lc`, `simple`, `heft`. Throws InvalidParams.
StrategySet parse_strategies(std::string_view text);

struct RunConfig {
    std::uint32_t threads = 8;
    std::optional<std::size_t> cap;  // nullopt: whole block per run
    StrategySet strategies;
    SimpleVariant simple_variant = SimpleVariant::prefix;
};

struct StrategyResult {
    Gas makespan = 0;
    double speedup = 0.0;
    std::optional<double> utilization;  // not defined for largest cluster

    friend bool operator==(const StrategyResult&, const StrategyResult&) = default;
};

struct BlockReport {
    std::uint64_t block_number = 0;
    std::size_t tx_count = 0;
    Gas total_gas = 0;
    std::uint32_t threads = 0;
    std::optional<std::size_t> cap;
    SimpleVariant simple_variant = SimpleVariant::prefix;
    bool skipped = false;  // empty block, no metrics
    std::optional<StrategyResult> largest_cluster;
    std::optional<StrategyResult> simple;
    std::optional<StrategyResult> heft;

    friend bool operator==(const BlockReport&, const BlockReport&) = default;
};

/// A schedule produced while evaluating one chunk, kept for debug dumps.
struct ChunkSchedule {
    std::string strategy;
    std::size_t chunk = 0;
    std::size_t first_position = 0;  // block position of the chunk's first transaction
    Schedule schedule;
};

/// Evaluates every requested strategy on the block, chunked by `config.cap`
/// when set. Chunk makespans are summed. Every simple and HEFT schedule is
/// checked; an invalid one raises InvariantViolation. When `schedules` is
/// non-null the checked schedules are appended to it.
BlockReport run_block(const BlockTrace& block, const RunConfig& config,
                      std::vector<ChunkSchedule>* schedules = nullptr);

std::string cap_label(const std::optional<std::size_t>& cap);
std::string format_ratio(double value);  // 6 significant digits

/// Comment lines preceding the CSV header: `# threads=8` and run labels.
std::string csv_preamble(const RunConfig& config);
std::string csv_header();
std::string csv_row(const BlockReport& report);
std::string json_row(const BlockReport& report);

struct StrategyAggregate {
    std::size_t blocks = 0;
    double mean = 0.0;           // unweighted per-block mean
    double weighted_mean = 0.0;  // weighted by total_gas
    double min = 0.0;
    double max = 0.0;
};

struct AggregateReport {
    std::uint64_t window_start = 0;  // block number range covered by the window
    std::uint64_t window_end = 0;
    std::size_t blocks = 0;
    std::optional<StrategyAggregate> largest_cluster;
    std::optional<StrategyAggregate> simple;
    std::optional<StrategyAggregate> heft;
};

/// Windowed speedup means. Windows span `window` consecutive block numbers
/// starting at the first block added; blocks must arrive in ascending order.
/// Skipped blocks do not contribute.
class Aggregator {
public:
    explicit Aggregator(std::uint64_t window);

    void add(const BlockReport& report);
    std::vector<AggregateReport> finish() const;

private:
    struct Sums {
        std::size_t blocks = 0;
        double sum = 0.0;
        double weighted_sum = 0.0;
        double weight = 0.0;
        double min = 0.0;
        double max = 0.0;
        void add(double speedup, double gas);
    };
    struct Window {
        std::size_t blocks = 0;
        Sums largest_cluster, simple, heft;
    };

    std::uint64_t window_;
    std::optional<std::uint64_t> anchor_;
    std::map<std::uint64_t, Window> windows_;
};

/// Sorts by block number, then aggregates. Throws InvalidParams if window is 0.
std::vector<AggregateReport> aggregate(std::span<const BlockReport> reports, std::uint64_t window);

std::string aggregate_csv_header();
std::string aggregate_csv_row(const AggregateReport& report);

}  // namespace txpar
