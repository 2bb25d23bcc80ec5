#include "txpar/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace txpar {

Gas Schedule::makespan() const noexcept {
    Gas m = 0;
    for (const auto& e : entries) m = std::max(m, e.finish);
    return m;
}

std::string ScheduleViolation::describe() const {
    const std::string pair = "(" + std::to_string(first) + "," + std::to_string(second) + ")";
    switch (kind) {
        case Kind::coverage: return "coverage: " + std::to_string(first) + " entries for " +
                                    std::to_string(second) + " transactions";
        case Kind::thread_range: return "thread out of range at " + std::to_string(first);
        case Kind::duration: return "duration mismatch at " + std::to_string(first);
        case Kind::thread_overlap: return "thread overlap " + pair;
        case Kind::conflict_overlap: return "conflict overlap " + pair;
        case Kind::order_inversion: return "consensus order inversion " + pair;
    }
    return "unknown";
}

std::vector<ScheduleViolation> check_valid(const Schedule& schedule, const BlockTrace& block,
                                           const ConflictGraph& graph) {
    using Kind = ScheduleViolation::Kind;
    std::vector<ScheduleViolation> out;
    const auto& e = schedule.entries;
    if (e.size() != block.size() || graph.size() != block.size()) {
        out.push_back({Kind::coverage, e.size(), block.size()});
        return out;
    }

    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i].thread >= schedule.threads) out.push_back({Kind::thread_range, i, i});
        if (e[i].finish < e[i].start || e[i].finish - e[i].start != block.transactions[i].gas_used) {
            out.push_back({Kind::duration, i, i});
        }
    }

    std::vector<std::size_t> order(e.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (e[a].thread != e[b].thread) return e[a].thread < e[b].thread;
        if (e[a].start != e[b].start) return e[a].start < e[b].start;
        return a < b;
    });
    // Compare each entry against the latest-finishing earlier entry on its thread.
    for (std::size_t k = 1, reach = order[0]; k < order.size(); ++k) {
        const std::size_t cur = order[k];
        if (e[cur].thread != e[reach].thread) {
            reach = cur;
            continue;
        }
        if (e[cur].start < e[reach].finish) {
            out.push_back({Kind::thread_overlap, std::min(reach, cur), std::max(reach, cur)});
        }
        if (e[cur].finish > e[reach].finish) reach = cur;
    }

    for (const auto& [i, j] : graph.chain_edges()) {
        if (e[j].start >= e[i].finish) continue;
        if (e[i].start >= e[j].finish) {
            out.push_back({Kind::order_inversion, i, j});
        } else {
            out.push_back({Kind::conflict_overlap, i, j});
        }
    }
    return out;
}

Schedule sequential_schedule(const BlockTrace& block) {
    Schedule s;
    s.threads = 1;
    s.entries.reserve(block.size());
    Gas t = 0;
    for (const auto& tx : block.transactions) {
        s.entries.push_back({0, t, t + tx.gas_used});
        t += tx.gas_used;
    }
    return s;
}

std::vector<BlockTrace> chunk(const BlockTrace& block, std::size_t cap) {
    if (cap == 0) throw std::invalid_argument("chunk cap must be >= 1");
    std::vector<BlockTrace> out;
    for (std::size_t begin = 0; begin < block.size(); begin += cap) {
        const std::size_t end = std::min(block.size(), begin + cap);
        BlockTrace slice;
        slice.block_number = block.block_number;
        slice.transactions.assign(block.transactions.begin() + static_cast<std::ptrdiff_t>(begin),
                                  block.transactions.begin() + static_cast<std::ptrdiff_t>(end));
        out.push_back(std::move(slice));
    }
    return out;
}

Gas combine_chunked(std::span<const Gas> makespans) {
    if (makespans.empty()) throw std::invalid_argument("combine_chunked needs at least one makespan");
    return std::accumulate(makespans.begin(), makespans.end(), Gas{0});
}

ScheduleMetrics metrics(Gas makespan, const BlockTrace& block, std::uint32_t threads) {
    if (block.empty()) throw EmptyBlockError("metrics are undefined for an empty block");
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
    if (makespan < block.max_gas()) {
        throw InvariantViolation("makespan " + std::to_string(makespan) +
                                 " is below the longest transaction (" + std::to_string(block.max_gas()) +
                                 ") in block " + std::to_string(block.block_number));
    }
    const auto total = static_cast<double>(block.total_gas());
    ScheduleMetrics m;
    m.makespan = makespan;
    m.speedup = total / static_cast<double>(makespan);
    m.utilization = total / (static_cast<double>(threads) * static_cast<double>(makespan));
    return m;
}

std::string schedule_json(const Schedule& schedule) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < schedule.entries.size(); ++i) {
        const auto& e = schedule.entries[i];
        rows.push_back({{"tx", i}, {"thread", e.thread}, {"start", e.start}, {"finish", e.finish}});
    }
    return rows.dump();
}

}  // namespace txpar
