#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "txpar/conflict_graph.hpp"
#include "txpar/trace.hpp"

namespace txpar {

/// Precedence constraints between transactions of one block: i -> j means
/// j may not start before i finishes. Every edge points forward in consensus
/// order, so the graph is acyclic by construction.
class PrecedenceDag {
public:
    PrecedenceDag() = default;

    /// Throws std::invalid_argument on a zero weight, an out-of-range endpoint
    /// or an edge that does not point forward (i < j).
    PrecedenceDag(std::vector<Gas> weights, std::span<const Edge> edges);

    std::size_t size() const noexcept { return weights_.size(); }
    Gas weight(std::size_t i) const noexcept { return weights_[i]; }
    std::span<const Gas> weights() const noexcept { return weights_; }
    Gas total_weight() const noexcept;

    /// Ascending.
    std::span<const std::size_t> successors(std::size_t i) const noexcept { return succ_[i]; }
    std::span<const std::size_t> predecessors(std::size_t i) const noexcept { return pred_[i]; }
    std::size_t edge_count() const noexcept;
    std::vector<Edge> edges() const;
    bool has_edge(std::size_t i, std::size_t j) const;

private:
    std::vector<Gas> weights_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;
};

enum class DagForm {
    full,     // one edge per conflicting pair
    reduced,  // transitive reduction of the above
};

PrecedenceDag build_dag(const BlockTrace& block, const ConflictGraph& graph, DagForm form = DagForm::reduced);

/// Transitive reduction of a forward-edge DAG.
PrecedenceDag transitive_reduction(const PrecedenceDag& dag);

/// Upward rank: weight(i) plus the largest rank among i's successors.
struct RankTable {
    std::vector<Gas> rank;
};

RankTable upward_rank(const PrecedenceDag& dag);

/// Heaviest path through the DAG (0 for an empty DAG).
Gas critical_path(const PrecedenceDag& dag);

}  // namespace txpar
