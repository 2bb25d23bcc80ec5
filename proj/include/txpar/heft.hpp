#pragma once

#include <cstdint>
#include <vector>

#include "txpar/dag.hpp"
#include "txpar/schedule.hpp"

namespace txpar {

/// HEFT list scheduling on identical threads with zero communication cost.
///
/// Tasks are taken in descending upward rank (ties: lower consensus index
/// first). Each task goes to the thread where it finishes earliest, using the
/// first idle gap on that thread that opens no earlier than the task's ready
/// time and is long enough to hold it (ties: lowest thread id).
Schedule heft_schedule(const PrecedenceDag& dag, std::uint32_t threads);

/// The order in which heft_schedule places tasks.
std::vector<std::size_t> heft_priority_order(const RankTable& ranks);

}  // namespace txpar
