#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "txpar/trace.hpp"

namespace txpar {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected conflict graph of one block. Vertices are transaction positions
/// (0-based, consensus order); i and j are adjacent iff their access lists
/// intersect.
///
/// The full edge set can be quadratic on blocks dominated by one hot account,
/// so it is not stored. What is stored is the "chain" edge set: for every
/// account, consecutive pairs of the transactions touching it. Chain edges
/// produce the same components and the same consensus-order reachability as
/// the full edge set.
class ConflictGraph {
public:
    ConflictGraph() = default;

    std::size_t size() const noexcept { return gas_.size(); }

    /// Pair query against the access lists; i == j is never a conflict.
    bool conflicts(std::size_t i, std::size_t j) const;

    /// Every conflicting pair (i < j), ascending. Quadratic; meant for small
    /// blocks and tests.
    std::vector<Edge> edges() const;

    /// Consecutive same-account pairs (i < j), sorted and unique.
    std::span<const Edge> chain_edges() const noexcept { return chain_edges_; }

    std::span<const Account> accounts(std::size_t i) const noexcept { return accounts_[i]; }
    Gas gas(std::size_t i) const noexcept { return gas_[i]; }
    Gas total_gas() const noexcept { return total_gas_; }

    /// Component id of position i: the smallest position in its component.
    std::size_t component_of(std::size_t i) const noexcept { return component_of_[i]; }
    /// Ascending list of component ids.
    std::span<const std::size_t> component_ids() const noexcept { return component_ids_; }
    std::size_t component_count() const noexcept { return component_ids_.size(); }
    Gas component_gas(std::size_t id) const noexcept { return component_gas_[id]; }
    std::size_t component_size(std::size_t id) const noexcept { return component_size_[id]; }
    /// Members of every component, components ordered by id, members ascending.
    std::vector<std::vector<std::size_t>> components() const;

    friend ConflictGraph build_conflict_graph(const BlockTrace& block);

private:
    std::vector<std::vector<Account>> accounts_;
    std::vector<Gas> gas_;
    Gas total_gas_ = 0;
    std::vector<Edge> chain_edges_;
    std::vector<std::size_t> component_of_;
    std::vector<std::size_t> component_ids_;
    std::vector<Gas> component_gas_;          // indexed by component id
    std::vector<std::size_t> component_size_;  // indexed by component id
};

ConflictGraph build_conflict_graph(const BlockTrace& block);

/// Makespan of serializing the heaviest component with one thread per component.
struct ClusterMetric {
    Gas makespan = 0;
    double speedup = 0.0;
    std::size_t largest_component_size = 0;
    std::size_t component_count = 0;
};

/// Throws EmptyBlockError for a graph with no transactions.
ClusterMetric largest_cluster_metric(const ConflictGraph& graph);

/// `{"components":[[0,1],[2]]}`
std::string components_json(const ConflictGraph& graph);

/// True iff the sorted ranges share an element.
bool sorted_intersects(std::span<const Account> a, std::span<const Account> b);

}  // namespace txpar
