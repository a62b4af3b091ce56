#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "recom/spanning_tree.hpp"

using namespace recom;
using namespace recom::testing;

namespace {

std::vector<int> all_nodes(const DualGraph& g) {
    std::vector<int> nodes(static_cast<std::size_t>(g.n_units()));
    std::iota(nodes.begin(), nodes.end(), 0);
    return nodes;
}

// Canonical signature: sorted (min,max) edge list.
std::vector<std::pair<int, int>> tree_signature(const Tree& t) {
    std::vector<std::pair<int, int>> sig;
    for (auto [p, c] : t.edges) sig.push_back({std::min(p, c), std::max(p, c)});
    std::sort(sig.begin(), sig.end());
    return sig;
}

bool tree_is_spanning(const DualGraph& g, const Tree& t, std::span<const int> subset) {
    if (t.nodes.size() != subset.size()) return false;
    if (t.edges.size() + 1 != t.nodes.size()) return false;
    // Every tree edge must be a graph edge inside the subset.
    std::set<std::pair<int, int>> graph_edges(g.edges().begin(), g.edges().end());
    for (auto [p, c] : t.edges) {
        if (!graph_edges.count({std::min(p, c), std::max(p, c)})) return false;
    }
    // Connectivity over tree edges.
    std::map<int, std::vector<int>> adj;
    for (auto [p, c] : t.edges) {
        adj[p].push_back(c);
        adj[c].push_back(p);
    }
    std::set<int> seen{t.nodes.front()};
    std::vector<int> stack{t.nodes.front()};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u]) {
            if (seen.insert(v).second) stack.push_back(v);
        }
    }
    return seen.size() == t.nodes.size();
}

}  // namespace

TEST_CASE("a path has a unique spanning tree") {
    auto g = make_path({1, 1, 1});
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        auto t = wilson_ust(g, all_nodes(g), rng);
        CHECK(tree_signature(t) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    }
}

TEST_CASE("triangle trees appear with frequency 1/3") {
    auto g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    Rng rng(11);
    std::map<std::vector<std::pair<int, int>>, std::int64_t> freq;
    const int samples = 9000;
    for (int i = 0; i < samples; ++i) {
        auto t = wilson_ust(g, all_nodes(g), rng);
        REQUIRE(tree_is_spanning(g, t, all_nodes(g)));
        freq[tree_signature(t)]++;
    }
    REQUIRE(freq.size() == 3);
    for (const auto& [sig, count] : freq) {
        CHECK(std::abs(count - samples / 3) < 200);
    }
}

TEST_CASE("2x3 grid has 15 spanning trees, all observed") {
    auto g = make_grid(2, 3);
    CHECK(count_spanning_trees(g, all_nodes(g)) == 15);
    CHECK(brute_force_tree_count(g, all_nodes(g)) == 15);

    Rng rng(5);
    std::set<std::vector<std::pair<int, int>>> seen;
    for (int i = 0; i < 2000; ++i) {
        seen.insert(tree_signature(wilson_ust(g, all_nodes(g), rng)));
    }
    CHECK(seen.size() == 15);
}

TEST_CASE("tree counts: cycle, K3, single node") {
    auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CHECK(count_spanning_trees(c4, all_nodes(c4)) == 4);

    auto k3 = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(count_spanning_trees(k3, all_nodes(k3)) == 3);

    std::vector<int> one{0};
    CHECK(count_spanning_trees(k3, one) == 1);
}

TEST_CASE("count agrees with brute force on random small graphs") {
    Rng rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5));  // 3..7 nodes
        // Random spanning tree ensures connectivity, then extra edges.
        std::vector<std::pair<int, int>> edges;
        for (int v = 1; v < n; ++v) {
            edges.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v});
        }
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if (rng.below(3) == 0) {
                    std::pair<int, int> e{a, b};
                    if (std::find(edges.begin(), edges.end(), e) == edges.end()) {
                        edges.push_back(e);
                    }
                }
            }
        }
        auto g = make_graph(n, edges);
        auto nodes = all_nodes(g);
        CHECK(count_spanning_trees(g, nodes).get_si() == brute_force_tree_count(g, nodes));
    }
}

TEST_CASE("guard rejects oversized subsets and disconnected ones") {
    auto g = make_grid(9, 9);  // 81 > 64
    CHECK_THROWS_AS((void)count_spanning_trees(g, all_nodes(g)), Error);

    auto path = make_path({1, 1, 1, 1});
    std::vector<int> split{0, 3};
    CHECK_THROWS_AS((void)count_spanning_trees(path, split), Error);
    Rng rng(3);
    CHECK_THROWS_AS((void)wilson_ust(path, split, rng), Error);
}

TEST_CASE("spanning_tree_score per district") {
    // Two districts, each a 4-cycle.
    auto g = make_grid(2, 4);
    auto plan = plan_from_assignment(g, {0, 0, 1, 1, 0, 0, 1, 1}, 2);
    auto scores = spanning_tree_score(g, plan);
    REQUIRE(scores.size() == 2);
    CHECK(scores[0] == 4);
    CHECK(scores[1] == 4);

    // Path districts score 1.
    auto p = make_path({1, 1, 1, 1});
    auto pp = plan_from_assignment(p, {0, 0, 1, 1}, 2);
    auto s2 = spanning_tree_score(p, pp);
    CHECK(s2[0] == 1);
    CHECK(s2[1] == 1);

    // Quadrants of the 4x4 grid are 4-cycles.
    auto g4 = make_grid(4, 4);
    std::vector<int> quad(16);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) quad[static_cast<std::size_t>(r * 4 + c)] = (r / 2) * 2 + c / 2;
    auto scores4 = spanning_tree_score(g4, plan_from_assignment(g4, quad, 4));
    for (const auto& s : scores4) CHECK(s == 4);
}

TEST_CASE("balanced cuts on the unit path") {
    auto g = make_path({1, 1, 1, 1});
    Rng rng(1);
    auto tree = wilson_ust(g, all_nodes(g), rng);  // the path itself
    auto pops = g.populations();

    auto cuts = balanced_cuts(tree, pops, Rational(2), Rational(0));
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].side_populations == std::pair<std::int64_t, std::int64_t>{2, 2});
    std::pair<int, int> edge{std::min(cuts[0].edge.first, cuts[0].edge.second),
                             std::max(cuts[0].edge.first, cuts[0].edge.second)};
    CHECK(edge == std::pair<int, int>{1, 2});
}

TEST_CASE("star with heavy center admits no balanced cut") {
    std::vector<UnitSpec> units{{"c", 10, {}}, {"l1", 1, {}}, {"l2", 1, {}}, {"l3", 1, {}}};
    auto g = DualGraph::build(std::move(units),
                              {{"c", "l1"}, {"c", "l2"}, {"c", "l3"}});
    Rng rng(1);
    std::vector<int> nodes{0, 1, 2, 3};
    auto tree = wilson_ust(g, nodes, rng);
    CHECK(balanced_cuts(tree, g.populations(), Rational(13, 2), Rational(1, 100)).empty());
}

TEST_CASE("path of six: cuts at positions 2,3,4 for eps=0.34") {
    auto g = make_path({1, 1, 1, 1, 1, 1});
    Rng rng(1);
    auto tree = wilson_ust(g, all_nodes(g), rng);
    auto cuts = balanced_cuts(tree, g.populations(), Rational(3), Rational(34, 100));
    REQUIRE(cuts.size() == 3);
    std::set<std::pair<std::int64_t, std::int64_t>> splits;
    for (const auto& c : cuts) splits.insert(c.side_populations);
    // Enumerating all five cuts of the path: 1/5 and 5/1 fall outside
    // [1.98, 4.02]; 2/4, 3/3, 4/2 fall inside.
    CHECK(splits == std::set<std::pair<std::int64_t, std::int64_t>>{{2, 4}, {3, 3}, {4, 2}});
}

TEST_CASE("properties: tree shape, cut side populations, permissive eps") {
    Rng rng(99);
    auto g = make_grid(4, 4);
    auto nodes = all_nodes(g);
    auto pops = g.populations();
    for (int trial = 0; trial < 50; ++trial) {
        auto tree = wilson_ust(g, nodes, rng);
        REQUIRE(tree_is_spanning(g, tree, nodes));

        // Re-derive side populations by explicit traversal after removal.
        auto cuts = tree_cuts(tree, pops);
        CHECK(cuts.size() == tree.edges.size());
        for (const auto& cut : cuts) {
            auto side = cut_side_nodes(tree, cut);
            std::int64_t pop = 0;
            for (int v : side) pop += pops[static_cast<std::size_t>(v)];
            CHECK(pop == cut.side_populations.first);
            CHECK(static_cast<std::int64_t>(16) - pop == cut.side_populations.second);
        }

        // eps large enough admits every cut.
        CHECK(balanced_cuts(tree, pops, Rational(8), Rational(1)).size() == tree.edges.size());
    }
}

TEST_CASE("uniformity: chi-square does not reject on small graphs") {
    // Graphs with <= 20 spanning trees, 1000 samples per tree.
    struct Case {
        DualGraph g;
        std::int64_t trees;
    };
    std::vector<Case> cases;
    cases.push_back({make_graph(3, {{0, 1}, {1, 2}, {0, 2}}), 3});
    cases.push_back({make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), 4});
    cases.push_back({make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}}), 8});
    cases.push_back({make_grid(2, 3), 15});

    Rng rng(2024);
    for (auto& [g, trees] : cases) {
        auto nodes = all_nodes(g);
        REQUIRE(count_spanning_trees(g, nodes) == trees);
        std::map<std::vector<std::pair<int, int>>, std::int64_t> freq;
        const std::int64_t samples = 1000 * trees;
        for (std::int64_t i = 0; i < samples; ++i) {
            freq[tree_signature(wilson_ust(g, nodes, rng))]++;
        }
        REQUIRE(static_cast<std::int64_t>(freq.size()) == trees);
        std::vector<std::int64_t> observed;
        for (const auto& [sig, count] : freq) observed.push_back(count);
        const double stat = chi_square_uniform(observed);
        const double critical = chi_square_critical(static_cast<int>(trees) - 1, 1e-3);
        CHECK_MESSAGE(stat < critical, "stat=", stat, " critical=", critical);
    }
}
