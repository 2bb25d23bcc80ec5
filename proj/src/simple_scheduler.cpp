#include "txpar/simple_scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace txpar {

namespace {

using AccountSet = std::unordered_set<Account, AccountHash>;

bool touches(const AccountSet& set, std::span<const Account> accounts) {
    return std::any_of(accounts.begin(), accounts.end(), [&](const Account& a) { return set.contains(a); });
}

void lock(AccountSet& set, std::span<const Account> accounts) { set.insert(accounts.begin(), accounts.end()); }

// Places `batch` at time `t` and returns the batch end.
Gas place_batch(Schedule& s, const std::vector<std::size_t>& batch, const ConflictGraph& graph, Gas t) {
    Gas longest = 0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        const Gas w = graph.gas(batch[k]);
        s.entries[batch[k]] = {static_cast<std::uint32_t>(k), t, t + w};
        longest = std::max(longest, w);
    }
    return t + longest;
}

Schedule prefix_batches(const ConflictGraph& graph, std::uint32_t threads) {
    Schedule s;
    s.threads = threads;
    s.entries.resize(graph.size());
    std::vector<std::size_t> batch;
    AccountSet locked;
    Gas t = 0;
    for (std::size_t i = 0; i < graph.size(); ++i) {
        if (batch.size() == threads || touches(locked, graph.accounts(i))) {
            t = place_batch(s, batch, graph, t);
            batch.clear();
            locked.clear();
        }
        batch.push_back(i);
        lock(locked, graph.accounts(i));
    }
    if (!batch.empty()) place_batch(s, batch, graph, t);
    return s;
}

Schedule scan_batches(const ConflictGraph& graph, std::uint32_t threads) {
    Schedule s;
    s.threads = threads;
    s.entries.resize(graph.size());
    std::vector<std::size_t> remaining(graph.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

    std::vector<std::size_t> batch;
    std::vector<std::size_t> deferred;
    AccountSet locked;  // accounts of batch members and of skipped transactions
    Gas t = 0;
    while (!remaining.empty()) {
        batch.clear();
        deferred.clear();
        locked.clear();
        std::size_t k = 0;
        for (; k < remaining.size() && batch.size() < threads; ++k) {
            const std::size_t i = remaining[k];
            if (touches(locked, graph.accounts(i))) {
                deferred.push_back(i);
            } else {
                batch.push_back(i);
            }
            lock(locked, graph.accounts(i));
        }
        deferred.insert(deferred.end(), remaining.begin() + static_cast<std::ptrdiff_t>(k), remaining.end());
        t = place_batch(s, batch, graph, t);
        remaining.swap(deferred);
    }
    return s;
}

}  // namespace

std::string_view to_string(SimpleVariant v) noexcept {
    return v == SimpleVariant::prefix ? "prefix" : "scan";
}

std::optional<SimpleVariant> parse_simple_variant(std::string_view text) noexcept {
    if (text == "prefix") return SimpleVariant::prefix;
    if (text == "scan") return SimpleVariant::scan;
    return std::nullopt;
}

Schedule simple_schedule(const BlockTrace& block, const ConflictGraph& graph, std::uint32_t threads,
                         SimpleVariant variant) {
    if (threads == 0) throw std::invalid_argument("threads must be >= 1");
    if (graph.size() != block.size()) throw std::invalid_argument("conflict graph does not match block");
    return variant == SimpleVariant::prefix ? prefix_batches(graph, threads) : scan_batches(graph, threads);
}

}  // namespace txpar
