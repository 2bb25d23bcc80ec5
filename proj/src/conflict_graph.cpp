#include "txpar/conflict_graph.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "txpar/union_find.hpp"

namespace txpar {

bool sorted_intersects(std::span<const Account> a, std::span<const Account> b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

bool ConflictGraph::conflicts(std::size_t i, std::size_t j) const {
    return i != j && sorted_intersects(accounts_[i], accounts_[j]);
}

std::vector<Edge> ConflictGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (conflicts(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> ConflictGraph::components() const {
    std::vector<std::vector<std::size_t>> out(component_ids_.size());
    std::vector<std::size_t> slot(size());
    for (std::size_t k = 0; k < component_ids_.size(); ++k) slot[component_ids_[k]] = k;
    for (std::size_t i = 0; i < size(); ++i) out[slot[component_of_[i]]].push_back(i);
    return out;
}

ConflictGraph build_conflict_graph(const BlockTrace& block) {
    ConflictGraph g;
    const std::size_t n = block.size();
    g.accounts_.reserve(n);
    g.gas_.reserve(n);
    for (const auto& tx : block.transactions) {
        std::vector<Account> acc = tx.accounts;
        if (!std::is_sorted(acc.begin(), acc.end())) std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        g.accounts_.push_back(std::move(acc));
        g.gas_.push_back(tx.gas_used);
        g.total_gas_ += tx.gas_used;
    }

    DisjointSets sets(n);
    std::unordered_map<Account, std::size_t, AccountHash> last_toucher;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& a : g.accounts_[i]) {
            auto [it, inserted] = last_toucher.try_emplace(a, i);
            if (!inserted) {
                g.chain_edges_.emplace_back(it->second, i);
                sets.unite(it->second, i);
                it->second = i;
            }
        }
    }
    std::sort(g.chain_edges_.begin(), g.chain_edges_.end());
    g.chain_edges_.erase(std::unique(g.chain_edges_.begin(), g.chain_edges_.end()), g.chain_edges_.end());

    g.component_of_.assign(n, 0);
    g.component_gas_.assign(n, 0);
    g.component_size_.assign(n, 0);
    std::vector<std::size_t> id_of_root(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        if (id_of_root[root] == n) {
            id_of_root[root] = i;
            g.component_ids_.push_back(i);
        }
        const std::size_t id = id_of_root[root];
        g.component_of_[i] = id;
        g.component_gas_[id] += g.gas_[i];
        ++g.component_size_[id];
    }
    return g;
}

ClusterMetric largest_cluster_metric(const ConflictGraph& graph) {
    if (graph.size() == 0) throw EmptyBlockError("largest cluster metric is undefined for an empty block");
    ClusterMetric m;
    std::size_t heaviest = graph.component_ids().front();
    for (const std::size_t id : graph.component_ids()) {
        if (graph.component_gas(id) > graph.component_gas(heaviest)) heaviest = id;
    }
    m.makespan = graph.component_gas(heaviest);
    m.speedup = static_cast<double>(graph.total_gas()) / static_cast<double>(m.makespan);
    m.largest_component_size = graph.component_size(heaviest);
    m.component_count = graph.component_count();
    return m;
}

std::string components_json(const ConflictGraph& graph) {
    nlohmann::json j;
    j["components"] = graph.components();
    return j.dump();
}

}  // namespace txpar
