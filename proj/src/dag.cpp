#include "txpar/dag.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace txpar {

PrecedenceDag::PrecedenceDag(std::vector<Gas> weights, std::span<const Edge> edges)
    : weights_(std::move(weights)), succ_(weights_.size()), pred_(weights_.size()) {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] == 0) throw std::invalid_argument("task " + std::to_string(i) + " has zero weight");
    }
    for (const auto& [i, j] : edges) {
        if (j >= weights_.size() || i >= j) {
            throw std::invalid_argument("edge " + std::to_string(i) + "->" + std::to_string(j) +
                                        " is out of range or not forward");
        }
        succ_[i].push_back(j);
        pred_[j].push_back(i);
    }
    for (auto* lists : {&succ_, &pred_}) {
        for (auto& l : *lists) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
        }
    }
}

Gas PrecedenceDag::total_weight() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), Gas{0});
}

std::size_t PrecedenceDag::edge_count() const noexcept {
    std::size_t m = 0;
    for (const auto& s : succ_) m += s.size();
    return m;
}

std::vector<Edge> PrecedenceDag::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < succ_.size(); ++i) {
        for (const std::size_t j : succ_[i]) out.emplace_back(i, j);
    }
    return out;
}

bool PrecedenceDag::has_edge(std::size_t i, std::size_t j) const {
    return i < succ_.size() && std::binary_search(succ_[i].begin(), succ_[i].end(), j);
}

namespace {

class Bitset {
public:
    explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace

PrecedenceDag transitive_reduction(const PrecedenceDag& dag) {
    // Successors are visited in ascending order. Any path i -> k -> ... -> j
    // has k < j, so by the time j is visited everything reachable through an
    // earlier successor is already marked.
    const std::size_t n = dag.size();
    std::vector<Bitset> reach(n, Bitset(n));
    std::vector<Edge> kept;
    for (std::size_t i = n; i-- > 0;) {
        Bitset covered(n);
        for (const std::size_t j : dag.successors(i)) {
            if (covered.test(j)) continue;
            kept.emplace_back(i, j);
            covered |= reach[j];
        }
        covered.set(i);
        reach[i] = std::move(covered);
    }
    return PrecedenceDag(std::vector<Gas>(dag.weights().begin(), dag.weights().end()), kept);
}

PrecedenceDag build_dag(const BlockTrace& block, const ConflictGraph& graph, DagForm form) {
    if (graph.size() != block.size()) throw std::invalid_argument("conflict graph does not match block");
    std::vector<Gas> weights;
    weights.reserve(block.size());
    for (const auto& tx : block.transactions) weights.push_back(std::max<Gas>(tx.gas_used, 1));

    if (form == DagForm::full) return PrecedenceDag(std::move(weights), graph.edges());
    // Chain edges reach exactly what the full conflict set reaches, and every
    // edge of the reduction is a chain edge (an intermediate toucher of the
    // shared account would otherwise make it transitive).
    return transitive_reduction(PrecedenceDag(std::move(weights), graph.chain_edges()));
}

RankTable upward_rank(const PrecedenceDag& dag) {
    RankTable t;
    t.rank.assign(dag.size(), 0);
    for (std::size_t i = dag.size(); i-- > 0;) {
        Gas tail = 0;
        for (const std::size_t j : dag.successors(i)) tail = std::max(tail, t.rank[j]);
        t.rank[i] = dag.weight(i) + tail;
    }
    return t;
}

Gas critical_path(const PrecedenceDag& dag) {
    const auto ranks = upward_rank(dag);
    return ranks.rank.empty() ? 0 : *std::max_element(ranks.rank.begin(), ranks.rank.end());
}

}  // namespace txpar
