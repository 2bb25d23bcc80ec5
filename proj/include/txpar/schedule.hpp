#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "txpar/conflict_graph.hpp"
#include "txpar/trace.hpp"

namespace txpar {

struct ScheduleEntry {
    std::uint32_t thread = 0;
    Gas start = 0;
    Gas finish = 0;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Non-preemptive assignment of a block's transactions to threads. Time is
/// measured in gas units; entry k belongs to transaction position k.
struct Schedule {
    std::uint32_t threads = 1;
    std::vector<ScheduleEntry> entries;

    Gas makespan() const noexcept;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct ScheduleViolation {
    enum class Kind {
        coverage,           // entry count differs from block size
        thread_range,       // thread id >= threads
        duration,           // finish - start != gas_used
        thread_overlap,     // two entries share a thread and overlap in time
        conflict_overlap,   // conflicting transactions run concurrently
        order_inversion,    // conflicting pair (i < j) runs j before i
    };
    Kind kind;
    std::size_t first = 0;
    std::size_t second = 0;

    std::string describe() const;
    friend bool operator==(const ScheduleViolation&, const ScheduleViolation&) = default;
};

/// Empty iff the schedule is equivalent to sequential execution: no thread
/// runs two transactions at once, every duration equals gas_used, and every
/// conflicting pair runs in consensus order without overlap.
///
/// Conflict ordering is checked over the graph's chain edges. Because every
/// duration is at least one gas unit, ordering consecutive touchers of each
/// account orders every conflicting pair transitively.
std::vector<ScheduleViolation> check_valid(const Schedule& schedule, const BlockTrace& block,
                                           const ConflictGraph& graph);

/// One transaction after another on thread 0.
Schedule sequential_schedule(const BlockTrace& block);

/// Consecutive consensus-order slices of at most `cap` transactions.
std::vector<BlockTrace> chunk(const BlockTrace& block, std::size_t cap);

/// Chunks run back to back. Throws std::invalid_argument on an empty list.
Gas combine_chunked(std::span<const Gas> makespans);

struct ScheduleMetrics {
    Gas makespan = 0;
    double speedup = 0.0;
    double utilization = 0.0;
};

/// Throws InvariantViolation if the makespan is below the longest single
/// transaction, and EmptyBlockError for an empty block.
ScheduleMetrics metrics(Gas makespan, const BlockTrace& block, std::uint32_t threads);

/// Gantt rows `[{"tx":0,"thread":0,"start":0,"finish":10},...]`.
std::string schedule_json(const Schedule& schedule);

}  // namespace txpar
