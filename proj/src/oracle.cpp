#include "txpar/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace txpar {

namespace {

constexpr Gas unset = std::numeric_limits<Gas>::max();

class Search {
public:
    Search(const PrecedenceDag& dag, std::uint32_t threads)
        : dag_(dag), threads_(threads), rank_(upward_rank(dag).rank),
          start_(dag.size(), unset), thread_of_(dag.size(), 0), free_at_(threads, 0) {
        // Sequential execution is always feasible and seeds the incumbent.
        best_ = dag.total_weight();
        best_schedule_.threads = threads;
        Gas t = 0;
        for (std::size_t i = 0; i < dag.size(); ++i) {
            best_schedule_.entries.push_back({0, t, t + dag.weight(i)});
            t += dag.weight(i);
        }
        unstarted_work_ = best_;
    }

    OracleResult run() {
        if (dag_.size() > 0) visit(0, 0);
        return {best_, best_schedule_, explored_};
    }

private:
    Gas finish(std::size_t i) const { return start_[i] + dag_.weight(i); }

    bool ready(std::size_t i, Gas t) const {
        if (start_[i] != unset) return false;
        for (const std::size_t p : dag_.predecessors(i)) {
            if (start_[p] == unset || finish(p) > t) return false;
        }
        return true;
    }

    Gas lower_bound(Gas t) const {
        Gas bound = 0;
        Gas running_work = 0;
        for (std::size_t i = 0; i < dag_.size(); ++i) {
            if (start_[i] == unset) {
                bound = std::max(bound, t + rank_[i]);
            } else {
                bound = std::max(bound, start_[i] + rank_[i]);
                if (finish(i) > t) running_work += finish(i) - t;
            }
        }
        const Gas work = unstarted_work_ + running_work;
        return std::max(bound, t + (work + threads_ - 1) / threads_);
    }

    void record_if_better() {
        Gas makespan = 0;
        for (std::size_t i = 0; i < dag_.size(); ++i) makespan = std::max(makespan, finish(i));
        if (makespan >= best_) return;
        best_ = makespan;
        for (std::size_t i = 0; i < dag_.size(); ++i) {
            best_schedule_.entries[i] = {thread_of_[i], start_[i], finish(i)};
        }
    }

    // Decide which tasks start at event time t; only tasks with index >= first
    // are still eligible at this event, so each subset is enumerated once.
    void visit(Gas t, std::size_t first) {
        ++explored_;
        if (started_ == dag_.size()) {
            record_if_better();
            return;
        }
        if (lower_bound(t) >= best_) return;

        std::uint32_t idle = threads_;
        for (const Gas f : free_at_) {
            if (f > t) --idle;
        }
        if (idle > 0) {
            for (std::size_t i = first; i < dag_.size(); ++i) {
                if (!ready(i, t)) continue;
                const auto thread = static_cast<std::uint32_t>(
                    std::find_if(free_at_.begin(), free_at_.end(), [&](Gas f) { return f <= t; }) -
                    free_at_.begin());
                const Gas saved_free = free_at_[thread];
                start_[i] = t;
                thread_of_[i] = thread;
                free_at_[thread] = t + dag_.weight(i);
                unstarted_work_ -= dag_.weight(i);
                ++started_;

                visit(t, i + 1);

                --started_;
                unstarted_work_ += dag_.weight(i);
                free_at_[thread] = saved_free;
                start_[i] = unset;
            }
        }

        // Leave the remaining threads idle until the next completion.
        Gas next = unset;
        for (std::size_t i = 0; i < dag_.size(); ++i) {
            if (start_[i] != unset && finish(i) > t) next = std::min(next, finish(i));
        }
        if (next != unset) visit(next, 0);
    }

    const PrecedenceDag& dag_;
    std::uint32_t threads_;
    std::vector<Gas> rank_;
    std::vector<Gas> start_;
    std::vector<std::uint32_t> thread_of_;
    std::vector<Gas> free_at_;
    Gas unstarted_work_ = 0;
    std::size_t started_ = 0;
    Gas best_ = 0;
    Schedule best_schedule_;
    std::uint64_t explored_ = 0;
};

}  // namespace

OracleResult optimal_schedule(const PrecedenceDag& dag, std::uint32_t threads, const OracleLimits& limits) {
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
    if (dag.size() > limits.max_tasks) {
        throw OracleLimitError("oracle instance has " + std::to_string(dag.size()) + " tasks, limit is " +
                               std::to_string(limits.max_tasks));
    }
    if (threads > limits.max_threads) {
        throw OracleLimitError("oracle instance has " + std::to_string(threads) + " threads, limit is " +
                               std::to_string(limits.max_threads));
    }
    return Search(dag, threads).run();
}

}  // namespace txpar
