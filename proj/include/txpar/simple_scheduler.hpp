#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "txpar/conflict_graph.hpp"
#include "txpar/schedule.hpp"
#include "txpar/trace.hpp"

namespace txpar {

enum class SimpleVariant {
    prefix,  // a batch closes at the first transaction conflicting with it
    scan,    // later transactions may still join, unless they conflict with a skipped one
};

std::string_view to_string(SimpleVariant v) noexcept;
std::optional<SimpleVariant> parse_simple_variant(std::string_view text) noexcept;

/// Barrier-synchronized batches of at most `threads` mutually non-conflicting
/// transactions; each batch lasts as long as its longest member. Inside a batch
/// transactions take threads 0, 1, ... in consensus order.
Schedule simple_schedule(const BlockTrace& block, const ConflictGraph& graph, std::uint32_t threads,
                         SimpleVariant variant = SimpleVariant::prefix);

}  // namespace txpar
