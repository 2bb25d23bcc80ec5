#pragma once

#include <cstddef>
#include <cstdint>

#include "txpar/dag.hpp"
#include "txpar/schedule.hpp"

namespace txpar {

struct OracleLimits {
    std::size_t max_tasks = 8;
    std::uint32_t max_threads = 3;
};

struct OracleResult {
    Gas optimal_makespan = 0;
    Schedule witness;
    std::uint64_t explored = 0;  // search nodes visited
};

/// Minimum makespan over all non-preemptive schedules of `dag` on `threads`
/// identical threads, by exhaustive depth-first branch and bound.
///
/// Some optimal schedule starts every task at time 0 or at some completion
/// time, so the search walks completion events in time order and, at each,
/// branches over every subset of the ready tasks that fits the idle threads
/// (including the empty subset, i.e. idling until the next completion).
///
/// Throws OracleLimitError when the instance exceeds `limits`.
OracleResult optimal_schedule(const PrecedenceDag& dag, std::uint32_t threads, const OracleLimits& limits = {});

}  // namespace txpar
