#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vb {

// Labeled graphs on vertex set {0, ..., n-1}. Edge {i, j} with i < j has the
// lexicographic linear index of the pair, so a graph is a bitset over the
// n(n-1)/2 edges of K_n.
inline constexpr int kMaxVertices = 8;
inline constexpr int kMaxExhaustiveVertices = 6;

using EdgeMask = std::uint32_t;

[[nodiscard]] constexpr int edge_count(int n) noexcept { return n * (n - 1) / 2; }

struct EdgeId {
    int i = 0;
    int j = 0;
    int index = 0;
};

// Canonical index of {i, j}; accepts either order.
[[nodiscard]] int edge_index(int n, int i, int j);
[[nodiscard]] EdgeId edge_from_index(int n, int index);

class LabeledGraph {
public:
    LabeledGraph() = default;
    LabeledGraph(int n, EdgeMask edges);

    [[nodiscard]] int vertices() const noexcept { return n_; }
    [[nodiscard]] EdgeMask edges() const noexcept { return edges_; }
    [[nodiscard]] int size() const noexcept;
    [[nodiscard]] bool has_edge(int index) const noexcept { return (edges_ >> index) & 1U; }
    [[nodiscard]] bool contains(const LabeledGraph& other) const noexcept {
        return n_ == other.n_ && (other.edges_ & ~edges_) == 0;
    }
    [[nodiscard]] bool connected() const noexcept;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;

private:
    int n_ = 1;
    EdgeMask edges_ = 0;
};

// Spanning tree; the constructor rejects anything that is not one.
class LabeledTree {
public:
    explicit LabeledTree(LabeledGraph g);

    [[nodiscard]] const LabeledGraph& graph() const noexcept { return graph_; }
    [[nodiscard]] int vertices() const noexcept { return graph_.vertices(); }
    [[nodiscard]] EdgeMask edges() const noexcept { return graph_.edges(); }

    friend bool operator==(const LabeledTree&, const LabeledTree&) = default;

private:
    LabeledGraph graph_;
};

// Total order on the edges of K_n, ascending by weight. rank(e) is the
// position of e; rank(a) > rank(b) implies weight(a) >= weight(b).
class EdgeOrder {
public:
    EdgeOrder(int n, std::vector<int> ascending);

    [[nodiscard]] int vertices() const noexcept { return n_; }
    [[nodiscard]] std::span<const int> ascending() const noexcept { return ascending_; }
    [[nodiscard]] int rank(int edge) const { return rank_[static_cast<std::size_t>(edge)]; }
    [[nodiscard]] bool precedes(int a, int b) const { return rank(a) < rank(b); }

private:
    int n_;
    std::vector<int> ascending_;
    std::vector<int> rank_;
};

// Sorts the edges of K_n by weight, ties broken by ascending tie_key and then
// by edge index. With no tie_key ties fall back to lexicographic (i, j).
// +inf weights are allowed, NaN throws InvalidInput.
[[nodiscard]] EdgeOrder build_edge_order(int n, std::span<const double> weights,
                                         std::span<const int> tie_key = {});

// All connected spanning subgraphs of K_n, 1 <= n <= 6, in increasing mask
// order.
[[nodiscard]] const std::vector<LabeledGraph>& enumerate_connected(int n);
void for_each_connected(int n, const std::function<void(const LabeledGraph&)>& visit);

// All n^{n-2} labeled trees on n <= 8 vertices, in Pruefer-sequence order.
[[nodiscard]] const std::vector<LabeledTree>& enumerate_trees(int n);

// Kruskal: scan g's edges in ascending order, keep those that join two
// components. Throws StructuralError if g is disconnected.
[[nodiscard]] LabeledTree kruskal_min_tree(const LabeledGraph& g, const EdgeOrder& order);

// M(tree): every edge of K_n that ranks at or above all tree edges on the
// tree path between its endpoints.
[[nodiscard]] LabeledGraph scheme_map(const LabeledTree& tree, const EdgeOrder& order);

struct PartitionReport {
    int n = 0;
    bool passed = true;
    std::uint64_t connected_graphs = 0;   // |G_n| from direct enumeration
    std::uint64_t trees = 0;
    std::uint64_t interval_total = 0;     // sum over trees of 2^{|M(t)| - (n-1)}
    std::uint64_t interval_members_checked = 0;
    std::optional<std::string> counterexample;
};

// Exhaustive check that the intervals [t, M(t)] partition the connected
// graphs and that Kruskal inverts M. 2 <= n <= 6.
[[nodiscard]] PartitionReport verify_partition(int n, const EdgeOrder& order);

}  // namespace vb
