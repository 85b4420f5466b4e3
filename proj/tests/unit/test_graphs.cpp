#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "virialbound/errors.hpp"
#include "virialbound/graphs.hpp"

using namespace vb;

namespace {

// Adjacency-matrix connectivity by DFS, independent of the library's bitset
// code. Edges are listed in lexicographic (i, j) order.
std::vector<std::pair<int, int>> lex_pairs(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

bool oracle_connected(int n, unsigned mask) {
    const auto pairs = lex_pairs(n);
    std::vector<std::vector<int>> adj(n);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        if (mask >> e & 1U) {
            adj[pairs[e].first].push_back(pairs[e].second);
            adj[pairs[e].second].push_back(pairs[e].first);
        }
    }
    std::vector<int> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

std::size_t oracle_connected_count(int n) {
    std::size_t c = 0;
    for (unsigned m = 0; m < (1U << edge_count(n)); ++m) {
        c += oracle_connected(n, m) ? 1 : 0;
    }
    return c;
}

// Kruskal with a plain union-find over ranks supplied by the test.
unsigned oracle_kruskal(int n, unsigned mask, const std::vector<int>& ascending) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            x = parent[x];
        }
        return x;
    };
    const auto pairs = lex_pairs(n);
    unsigned tree = 0;
    for (int e : ascending) {
        if (!(mask >> e & 1U)) {
            continue;
        }
        const int a = find(pairs[e].first);
        const int b = find(pairs[e].second);
        if (a != b) {
            parent[a] = b;
            tree |= 1U << e;
        }
    }
    return tree;
}

int e(int n, int i, int j) { return edge_index(n, i - 1, j - 1); }

}  // namespace

TEST_CASE("edge indices are a bijection") {
    for (int n = 2; n <= kMaxVertices; ++n) {
        const auto pairs = lex_pairs(n);
        for (int k = 0; k < edge_count(n); ++k) {
            const auto id = edge_from_index(n, k);
            CHECK(id.i == pairs[k].first);
            CHECK(id.j == pairs[k].second);
            CHECK(id.index == k);
            CHECK(edge_index(n, id.j, id.i) == k);
        }
    }
}

TEST_CASE("connected graph counts match exhaustive oracle") {
    CHECK(enumerate_connected(1).size() == 1);
    CHECK(enumerate_connected(3).size() == 4);
    CHECK(enumerate_connected(4).size() == 38);
    for (int n = 1; n <= 6; ++n) {
        const auto& graphs = enumerate_connected(n);
        CHECK(graphs.size() == oracle_connected_count(n));
        for (const auto& g : graphs) {
            REQUIRE(oracle_connected(n, g.edges()));
        }
    }
    CHECK(enumerate_connected(5).size() == 728);
    CHECK(enumerate_connected(6).size() == 26704);
    CHECK_THROWS_AS((void)enumerate_connected(7), CapacityError);
    CHECK_THROWS_AS((void)enumerate_connected(0), CapacityError);
}

TEST_CASE("tree counts are n^(n-2) and trees are distinct spanning trees") {
    for (int n = 1; n <= kMaxVertices; ++n) {
        const auto& trees = enumerate_trees(n);
        const auto expected = n == 1 ? 1.0 : std::pow(n, n - 2);
        CHECK(trees.size() == static_cast<std::size_t>(expected));
        std::vector<unsigned> masks;
        for (const auto& t : trees) {
            REQUIRE(std::popcount(t.edges()) == n - 1);
            REQUIRE(oracle_connected(n, t.edges()));
            masks.push_back(t.edges());
        }
        std::sort(masks.begin(), masks.end());
        CHECK(std::adjacent_find(masks.begin(), masks.end()) == masks.end());
    }
    CHECK(enumerate_trees(4).size() == 16);
    CHECK(enumerate_trees(6).size() == 1296);
    CHECK_THROWS_AS((void)enumerate_trees(9), CapacityError);
}

TEST_CASE("labeled tree validation") {
    CHECK_THROWS_AS(LabeledTree(LabeledGraph(3, 0b111)), StructuralError);
    CHECK_THROWS_AS(LabeledTree(LabeledGraph(4, 1U << e(4, 1, 2) | 1U << e(4, 3, 4))), StructuralError);
    CHECK_NOTHROW(LabeledTree(LabeledGraph(3, 0b011)));
}

TEST_CASE("edge order from weights") {
    const std::vector<double> w{-1.0, 0.5, -0.2};  // e12, e13, e23
    const auto ord = build_edge_order(3, w);
    const std::vector<int> expected{e(3, 1, 2), e(3, 2, 3), e(3, 1, 3)};
    CHECK(std::vector<int>(ord.ascending().begin(), ord.ascending().end()) == expected);

    const std::vector<double> same(6, 2.0);
    const auto lex = build_edge_order(4, same);
    for (int k = 0; k < 6; ++k) {
        CHECK(lex.ascending()[k] == k);
    }
    const std::vector<double> with_inf{INFINITY, 0.0, 1.0};
    CHECK(build_edge_order(3, with_inf).ascending()[2] == 0);
    const std::vector<double> bad{0.0, NAN, 1.0};
    CHECK_THROWS_AS((void)build_edge_order(3, bad), InvalidInput);
}

TEST_CASE("kruskal and scheme map hand examples") {
    const std::vector<double> w{-1.0, 0.5, -0.2};
    const auto ord = build_edge_order(3, w);
    const LabeledGraph k3(3, 0b111);
    const auto t = kruskal_min_tree(k3, ord);
    CHECK(t.edges() == (1U << e(3, 1, 2) | 1U << e(3, 2, 3)));
    CHECK(scheme_map(t, ord) == k3);

    const LabeledTree star(LabeledGraph(3, 1U << e(3, 1, 2) | 1U << e(3, 1, 3)));
    CHECK(scheme_map(star, ord) == star.graph());
    CHECK(kruskal_min_tree(star.graph(), ord) == star);

    const std::vector<double> inc{1, 2, 3, 4, 5, 6};
    const auto ord4 = build_edge_order(4, inc);
    const auto t4 = kruskal_min_tree(LabeledGraph(4, 0b111111), ord4);
    CHECK(t4.edges() == (1U << e(4, 1, 2) | 1U << e(4, 1, 3) | 1U << e(4, 1, 4)));

    const LabeledTree k2(LabeledGraph(2, 1));
    CHECK(scheme_map(k2, build_edge_order(2, std::vector<double>{0.0})) == k2.graph());

    CHECK_THROWS_AS((void)kruskal_min_tree(LabeledGraph(3, 0b001), ord), StructuralError);
}

TEST_CASE("partition passes for every order of K_3") {
    std::vector<int> perm{0, 1, 2};
    do {
        const auto r = verify_partition(3, EdgeOrder(3, perm));
        CHECK(r.passed);
        CHECK(r.interval_total == 4);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const auto r2 = verify_partition(2, EdgeOrder(2, {0}));
    CHECK(r2.passed);
    CHECK(r2.interval_total == 1);
}

TEST_CASE("partition property against an independent kruskal, with ties") {
    std::mt19937_64 rng(2024);
    for (int n = 2; n <= 5; ++n) {
        const int m = edge_count(n);
        for (int trial = 0; trial < 40; ++trial) {
            std::vector<double> w(m);
            for (auto& x : w) {
                x = trial % 2 ? static_cast<double>(rng() % 3) : static_cast<double>(rng() % 1000) / 7.0;
            }
            std::vector<int> tie;
            if (trial % 3 == 0) {
                tie.resize(m);
                for (auto& t : tie) {
                    t = static_cast<int>(rng() % 5);
                }
            }
            const auto ord = build_edge_order(n, w, tie);
            const std::vector<int> asc(ord.ascending().begin(), ord.ascending().end());
            // compatibility with weights
            for (int k = 1; k < m; ++k) {
                REQUIRE(w[asc[k]] >= w[asc[k - 1]]);
            }
            std::map<unsigned, std::size_t> preimage;
            for (const auto& g : enumerate_connected(n)) {
                const auto t = kruskal_min_tree(g, ord);
                REQUIRE(t.edges() == oracle_kruskal(n, g.edges(), asc));
                REQUIRE(scheme_map(t, ord).contains(g));
                ++preimage[t.edges()];
            }
            for (const auto& t : enumerate_trees(n)) {
                const auto mt = scheme_map(t, ord);
                REQUIRE(mt.contains(t.graph()));
                REQUIRE(kruskal_min_tree(mt, ord) == t);
                const std::size_t interval = std::size_t{1} << (mt.size() - (n - 1));
                REQUIRE(preimage[t.edges()] == interval);
            }
            const auto report = verify_partition(n, ord);
            REQUIRE(report.passed);
            CHECK(report.interval_total == oracle_connected_count(n));
        }
    }
}

TEST_CASE("partition for n = 6") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> w(15);
        for (auto& x : w) {
            x = static_cast<double>(rng() % 4);
        }
        const auto r = verify_partition(6, build_edge_order(6, w));
        CHECK(r.passed);
        CHECK(r.interval_total == 26704);
    }
    CHECK_THROWS_AS((void)verify_partition(7, build_edge_order(7, std::vector<double>(21, 0.0))), CapacityError);
}
