#include "txpar/heft.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace txpar {

namespace {

struct Busy {
    Gas start;
    Gas finish;
    friend bool operator<(const Busy& a, const Busy& b) { return a.start < b.start; }
};

// Earliest start >= ready of a gap of length `w` on a timeline of disjoint,
// start-sorted intervals.
Gas earliest_slot(const std::vector<Busy>& timeline, Gas ready, Gas w) {
    Gas candidate = ready;
    for (const auto& b : timeline) {
        if (b.finish <= candidate) continue;
        if (candidate + w <= b.start) return candidate;
        candidate = std::max(candidate, b.finish);
    }
    return candidate;
}

}  // namespace

std::vector<std::size_t> heft_priority_order(const RankTable& ranks) {
    std::vector<std::size_t> order(ranks.rank.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks.rank[a] > ranks.rank[b]; });
    return order;
}

Schedule heft_schedule(const PrecedenceDag& dag, std::uint32_t threads) {
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
    const auto ranks = upward_rank(dag);

    Schedule s;
    s.threads = threads;
    s.entries.resize(dag.size());
    std::vector<bool> placed(dag.size(), false);
    std::vector<std::vector<Busy>> timelines(threads);

    for (const std::size_t task : heft_priority_order(ranks)) {
        Gas ready = 0;
        for (const std::size_t p : dag.predecessors(task)) {
            if (!placed[p]) {
                throw InvariantViolation("task " + std::to_string(task) + " ranked ahead of predecessor " +
                                         std::to_string(p));
            }
            ready = std::max(ready, s.entries[p].finish);
        }
        const Gas w = dag.weight(task);

        std::uint32_t best_thread = 0;
        Gas best_start = std::numeric_limits<Gas>::max();
        for (std::uint32_t t = 0; t < threads; ++t) {
            const Gas start = earliest_slot(timelines[t], ready, w);
            if (start < best_start) {
                best_start = start;
                best_thread = t;
            }
            // An empty thread gives the ready time itself; later threads can't beat it.
            if (timelines[t].empty()) break;
        }

        auto& line = timelines[best_thread];
        const Busy slot{best_start, best_start + w};
        line.insert(std::upper_bound(line.begin(), line.end(), slot), slot);
        s.entries[task] = {best_thread, slot.start, slot.finish};
        placed[task] = true;
    }
    return s;
}

}  // namespace txpar
