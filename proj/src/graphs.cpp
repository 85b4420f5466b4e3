#include "virialbound/graphs.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

#include "virialbound/errors.hpp"

namespace vb {
namespace {

void check_vertices(int n, int cap, const char* what) {
    if (n < 1 || n > cap) {
        std::ostringstream msg;
        msg << what << ": n = " << n << " outside supported range [1, " << cap << "]";
        throw CapacityError(msg.str());
    }
}

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            auto& p = parent_[static_cast<std::size_t>(x)];
            p = parent_[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent_[static_cast<std::size_t>(b)] = a;
        return true;
    }

private:
    std::vector<int> parent_;
};

// Edge endpoints for every n, indexed by linear edge id.
struct EdgeTable {
    std::array<std::array<std::pair<int, int>, edge_count(kMaxVertices)>, kMaxVertices + 1> ends{};
    EdgeTable() {
        for (int n = 1; n <= kMaxVertices; ++n) {
            int k = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    ends[static_cast<std::size_t>(n)][static_cast<std::size_t>(k++)] = {i, j};
                }
            }
        }
    }
};

const EdgeTable& edge_table() {
    static const EdgeTable table;
    return table;
}

std::pair<int, int> ends_of(int n, int e) {
    return edge_table().ends[static_cast<std::size_t>(n)][static_cast<std::size_t>(e)];
}

bool mask_connected(int n, EdgeMask mask) {
    if (n <= 1) {
        return true;
    }
    // Grow the component of vertex 0 until it stops changing.
    std::uint32_t reached = 1U;
    for (bool grew = true; grew;) {
        grew = false;
        for (EdgeMask m = mask; m != 0; m &= m - 1) {
            const auto [i, j] = ends_of(n, std::countr_zero(m));
            const bool in_i = (reached >> i) & 1U;
            const bool in_j = (reached >> j) & 1U;
            if (in_i != in_j) {
                reached |= (1U << i) | (1U << j);
                grew = true;
            }
        }
    }
    return reached == (1U << n) - 1U;
}

// Decodes a Pruefer sequence of length n-2 into a tree edge mask.
EdgeMask decode_pruefer(int n, std::span<const int> seq) {
    std::array<int, kMaxVertices> degree{};
    std::fill_n(degree.begin(), n, 1);
    for (int v : seq) {
        ++degree[static_cast<std::size_t>(v)];
    }
    EdgeMask mask = 0;
    for (int v : seq) {
        int leaf = 0;
        while (degree[static_cast<std::size_t>(leaf)] != 1) {
            ++leaf;
        }
        mask |= EdgeMask{1} << edge_index(n, leaf, v);
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(v)];
    }
    int u = -1;
    for (int v = 0; v < n; ++v) {
        if (degree[static_cast<std::size_t>(v)] == 1) {
            if (u < 0) {
                u = v;
            } else {
                mask |= EdgeMask{1} << edge_index(n, u, v);
                break;
            }
        }
    }
    return mask;
}

}  // namespace

int edge_index(int n, int i, int j) {
    if (i > j) {
        std::swap(i, j);
    }
    if (i < 0 || j >= n || i == j) {
        throw InvalidInput("edge endpoints must be distinct vertices of K_n");
    }
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

EdgeId edge_from_index(int n, int index) {
    if (n < 2 || n > kMaxVertices || index < 0 || index >= edge_count(n)) {
        throw InvalidInput("edge index out of range");
    }
    const auto [i, j] = ends_of(n, index);
    return EdgeId{i, j, index};
}

LabeledGraph::LabeledGraph(int n, EdgeMask edges) : n_(n), edges_(edges) {
    check_vertices(n, kMaxVertices, "LabeledGraph");
    const int width = edge_count(n);
    if (width < 32 && (edges >> width) != 0) {
        throw InvalidInput("edge mask has bits beyond K_n");
    }
}

int LabeledGraph::size() const noexcept { return std::popcount(edges_); }

bool LabeledGraph::connected() const noexcept { return mask_connected(n_, edges_); }

std::string LabeledGraph::to_string() const {
    std::ostringstream out;
    out << '{';
    bool first = true;
    for (EdgeMask m = edges_; m != 0; m &= m - 1) {
        const auto [i, j] = ends_of(n_, std::countr_zero(m));
        out << (first ? "" : ",") << i + 1 << '-' << j + 1;
        first = false;
    }
    out << '}';
    return out.str();
}

LabeledTree::LabeledTree(LabeledGraph g) : graph_(g) {
    if (g.size() != g.vertices() - 1 || !g.connected()) {
        throw StructuralError("edge set " + g.to_string() + " is not a spanning tree");
    }
}

EdgeOrder::EdgeOrder(int n, std::vector<int> ascending)
    : n_(n), ascending_(std::move(ascending)), rank_(ascending_.size(), -1) {
    check_vertices(n, kMaxVertices, "EdgeOrder");
    if (static_cast<int>(ascending_.size()) != edge_count(n)) {
        throw InvalidInput("edge order must list every edge of K_n once");
    }
    for (std::size_t pos = 0; pos < ascending_.size(); ++pos) {
        const int e = ascending_[pos];
        if (e < 0 || e >= edge_count(n) || rank_[static_cast<std::size_t>(e)] != -1) {
            throw InvalidInput("edge order is not a permutation of the edges of K_n");
        }
        rank_[static_cast<std::size_t>(e)] = static_cast<int>(pos);
    }
}

EdgeOrder build_edge_order(int n, std::span<const double> weights, std::span<const int> tie_key) {
    check_vertices(n, kMaxVertices, "build_edge_order");
    const auto m = static_cast<std::size_t>(edge_count(n));
    if (weights.size() != m || (!tie_key.empty() && tie_key.size() != m)) {
        throw InvalidInput("need exactly one weight (and tie key) per edge of K_n");
    }
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return std::isnan(w); })) {
        throw InvalidInput("edge weight is NaN");
    }
    std::vector<int> ids(m);
    std::iota(ids.begin(), ids.end(), 0);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (weights[ua] != weights[ub]) {
            return weights[ua] < weights[ub];
        }
        if (!tie_key.empty() && tie_key[ua] != tie_key[ub]) {
            return tie_key[ua] < tie_key[ub];
        }
        return a < b;
    });
    return EdgeOrder(n, std::move(ids));
}

const std::vector<LabeledGraph>& enumerate_connected(int n) {
    check_vertices(n, kMaxExhaustiveVertices, "enumerate_connected");
    static std::array<std::vector<LabeledGraph>, kMaxExhaustiveVertices + 1> cache;
    static std::array<std::once_flag, kMaxExhaustiveVertices + 1> once;
    const auto k = static_cast<std::size_t>(n);
    std::call_once(once[k], [n, &slot = cache[k]] {
        const EdgeMask limit = EdgeMask{1} << edge_count(n);
        for (EdgeMask mask = 0; mask < limit; ++mask) {
            if (mask_connected(n, mask)) {
                slot.emplace_back(n, mask);
            }
        }
    });
    return cache[k];
}

void for_each_connected(int n, const std::function<void(const LabeledGraph&)>& visit) {
    for (const auto& g : enumerate_connected(n)) {
        visit(g);
    }
}

const std::vector<LabeledTree>& enumerate_trees(int n) {
    check_vertices(n, kMaxVertices, "enumerate_trees");
    static std::array<std::vector<LabeledTree>, kMaxVertices + 1> cache;
    static std::array<std::once_flag, kMaxVertices + 1> once;
    const auto k = static_cast<std::size_t>(n);
    std::call_once(once[k], [n, &slot = cache[k]] {
        if (n <= 2) {
            slot.emplace_back(LabeledGraph(n, n == 2 ? 1U : 0U));
            return;
        }
        std::vector<int> seq(static_cast<std::size_t>(n - 2), 0);
        while (true) {
            slot.emplace_back(LabeledGraph(n, decode_pruefer(n, seq)));
            std::size_t pos = seq.size();
            while (pos > 0 && seq[pos - 1] == n - 1) {
                seq[--pos] = 0;
            }
            if (pos == 0) {
                break;
            }
            ++seq[pos - 1];
        }
    });
    return cache[k];
}

LabeledTree kruskal_min_tree(const LabeledGraph& g, const EdgeOrder& order) {
    const int n = g.vertices();
    if (order.vertices() != n) {
        throw StructuralError("edge order and graph disagree on n");
    }
    UnionFind components(n);
    EdgeMask chosen = 0;
    int picked = 0;
    for (int e : order.ascending()) {
        if (picked == n - 1) {
            break;
        }
        if (!g.has_edge(e)) {
            continue;
        }
        const auto [i, j] = ends_of(n, e);
        if (components.unite(i, j)) {
            chosen |= EdgeMask{1} << e;
            ++picked;
        }
    }
    if (picked != n - 1) {
        throw StructuralError("graph " + g.to_string() + " is not connected");
    }
    return LabeledTree(LabeledGraph(n, chosen));
}

LabeledGraph scheme_map(const LabeledTree& tree, const EdgeOrder& order) {
    const int n = tree.vertices();
    if (order.vertices() != n) {
        throw StructuralError("edge order and tree disagree on n");
    }
    // Root at 0; parent pointers with the rank of the edge to the parent.
    std::array<int, kMaxVertices> parent{};
    std::array<int, kMaxVertices> up_rank{};
    std::array<int, kMaxVertices> depth{};
    std::array<int, kMaxVertices> queue{};
    parent.fill(-1);
    std::uint32_t seen = 1U;
    int head = 0;
    int tail = 0;
    queue[static_cast<std::size_t>(tail++)] = 0;
    while (head < tail) {
        const int v = queue[static_cast<std::size_t>(head++)];
        for (EdgeMask m = tree.edges(); m != 0; m &= m - 1) {
            const int e = std::countr_zero(m);
            const auto [a, b] = ends_of(n, e);
            const int w = a == v ? b : (b == v ? a : -1);
            if (w < 0 || ((seen >> w) & 1U)) {
                continue;
            }
            seen |= 1U << w;
            const auto sw = static_cast<std::size_t>(w);
            parent[sw] = v;
            up_rank[sw] = order.rank(e);
            depth[sw] = depth[static_cast<std::size_t>(v)] + 1;
            queue[static_cast<std::size_t>(tail++)] = w;
        }
    }

    EdgeMask result = 0;
    for (int e = 0; e < edge_count(n); ++e) {
        auto [a, b] = ends_of(n, e);
        int highest = -1;
        while (a != b) {
            if (depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)]) {
                std::swap(a, b);
            }
            highest = std::max(highest, up_rank[static_cast<std::size_t>(a)]);
            a = parent[static_cast<std::size_t>(a)];
        }
        if (order.rank(e) >= highest) {
            result |= EdgeMask{1} << e;
        }
    }
    return LabeledGraph(n, result);
}

PartitionReport verify_partition(int n, const EdgeOrder& order) {
    if (n < 2 || n > kMaxExhaustiveVertices) {
        throw CapacityError("verify_partition: n = " + std::to_string(n) +
                            " outside supported range [2, 6]");
    }
    if (order.vertices() != n) {
        throw StructuralError("edge order and n disagree");
    }
    PartitionReport report;
    report.n = n;
    auto fail = [&report](std::string what) {
        if (report.passed) {
            report.passed = false;
            report.counterexample = std::move(what);
        }
    };

    const auto& graphs = enumerate_connected(n);
    report.connected_graphs = graphs.size();
    for (const auto& g : graphs) {
        const LabeledTree tau = kruskal_min_tree(g, order);
        const LabeledGraph upper = scheme_map(tau, order);
        if (!g.contains(tau.graph()) || !upper.contains(g)) {
            fail("graph " + g.to_string() + " not in [T(g), M(T(g))] with T(g) = " +
                 tau.graph().to_string());
        }
    }

    const auto& trees = enumerate_trees(n);
    report.trees = trees.size();
    for (const auto& tau : trees) {
        const LabeledGraph upper = scheme_map(tau, order);
        if (!upper.contains(tau.graph())) {
            fail("M(t) does not contain t = " + tau.graph().to_string());
            continue;
        }
        const EdgeMask free = upper.edges() & ~tau.edges();
        report.interval_total += std::uint64_t{1} << std::popcount(free);
        // Walk every subset of the free edges.
        EdgeMask sub = 0;
        do {
            const LabeledGraph g(n, tau.edges() | sub);
            ++report.interval_members_checked;
            if (!(kruskal_min_tree(g, order) == tau)) {
                fail("T(g) != t for g = " + g.to_string() + ", t = " + tau.graph().to_string());
            }
            sub = (sub - free) & free;
        } while (sub != 0);
    }
    if (report.interval_total != report.connected_graphs) {
        fail("interval sizes sum to " + std::to_string(report.interval_total) + " but |G_n| = " +
             std::to_string(report.connected_graphs));
    }
    return report;
}

}  // namespace vb
