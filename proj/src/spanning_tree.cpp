#include "recom/spanning_tree.hpp"

#include <algorithm>
#include <string>

namespace recom {

namespace {

// Compact view of the induced subgraph: local ids 0..m-1 in sorted order.
struct SubgraphView {
    std::vector<int> nodes;                 // local -> graph index
    std::vector<std::vector<int>> adj;      // local adjacency, sorted
    std::vector<int> local;                 // graph index -> local id (or -1)

    explicit SubgraphView(const DualGraph& graph, std::span<const int> subset) {
        nodes.assign(subset.begin(), subset.end());
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        local.assign(static_cast<std::size_t>(graph.n_units()), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
        }
        adj.resize(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (int nb : graph.neighbors(nodes[i])) {
                int lo = local[static_cast<std::size_t>(nb)];
                if (lo >= 0) adj[i].push_back(lo);
            }
        }
    }

    std::size_t size() const { return nodes.size(); }
};

void require_connected_subset(const DualGraph& graph, const SubgraphView& view) {
    if (view.size() == 0) fail(Errc::disconnected_subset, "empty node subset");
    if (!subset_connected(graph, view.nodes)) {
        fail(Errc::disconnected_subset, "node subset does not induce a connected subgraph");
    }
}

}  // namespace

Tree wilson_ust(const DualGraph& graph, std::span<const int> node_subset, Rng& rng) {
    SubgraphView view(graph, node_subset);
    require_connected_subset(graph, view);

    const std::size_t m = view.size();
    Tree tree;
    tree.nodes = view.nodes;
    tree.root = view.nodes.front();
    if (m == 1) return tree;

    std::vector<char> in_tree(m, 0);
    std::vector<int> next(m, -1);  // successor along the current walk
    in_tree[0] = 1;

    for (std::size_t start = 1; start < m; ++start) {
        if (in_tree[start]) continue;
        // Random walk from `start` until the tree is hit; loops are erased
        // implicitly because next[] keeps only the last exit from each node.
        std::size_t u = start;
        while (!in_tree[u]) {
            const auto& nbrs = view.adj[u];
            std::size_t pick = rng.index(nbrs.size());
            next[u] = nbrs[pick];
            u = static_cast<std::size_t>(next[u]);
        }
        // Commit the loop-erased path.
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            std::size_t v = static_cast<std::size_t>(next[u]);
            tree.edges.push_back({view.nodes[v], view.nodes[u]});  // parent, child
            u = v;
        }
    }

    // Canonical edge order: ascending child node.
    std::sort(tree.edges.begin(), tree.edges.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return tree;
}

mpz_class count_spanning_trees(const DualGraph& graph, std::span<const int> node_subset) {
    SubgraphView view(graph, node_subset);
    if (view.size() > static_cast<std::size_t>(kSpanningTreeCountGuard)) {
        fail(Errc::subset_too_large,
             "spanning tree count limited to " + std::to_string(kSpanningTreeCountGuard) +
                 " nodes, got " + std::to_string(view.size()));
    }
    require_connected_subset(graph, view);

    const std::size_t m = view.size();
    if (m <= 1) return 1;

    // Laplacian cofactor: drop row/column 0, then fraction-free Bareiss
    // elimination. Entries stay integral throughout, so the result is exact.
    const std::size_t n = m - 1;
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 1; i < m; ++i) {
        for (int nb : view.adj[i]) {
            a[i - 1][i - 1] += 1;
            if (nb >= 1) a[i - 1][static_cast<std::size_t>(nb) - 1] -= 1;
        }
    }

    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t col = 0; col < n; ++col) {
        if (a[col][col] == 0) {
            std::size_t pivot = col + 1;
            while (pivot < n && a[pivot][col] == 0) ++pivot;
            if (pivot == n) return 0;  // singular: cannot happen on a connected subgraph
            std::swap(a[col], a[pivot]);
            sign = -sign;
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            for (std::size_t j = col + 1; j < n; ++j) {
                a[row][j] = (a[row][j] * a[col][col] - a[row][col] * a[col][j]) / prev;
            }
            a[row][col] = 0;
        }
        prev = a[col][col];
    }
    return sign > 0 ? a[n - 1][n - 1] : mpz_class(-a[n - 1][n - 1]);
}

std::vector<mpz_class> spanning_tree_score(const DualGraph& graph, const Plan& plan) {
    validate_plan(graph, plan);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(plan.k));
    for (int i = 0; i < graph.n_units(); ++i) {
        members[static_cast<std::size_t>(plan.assignment[static_cast<std::size_t>(i)])].push_back(i);
    }
    std::vector<mpz_class> counts;
    counts.reserve(members.size());
    for (const auto& m : members) counts.push_back(count_spanning_trees(graph, m));
    return counts;
}

std::vector<CutCandidate> tree_cuts(const Tree& tree,
                                    std::span<const std::int64_t> unit_populations) {
    std::vector<CutCandidate> cuts;
    if (tree.edges.empty()) return cuts;

    // Children lists in the rooted orientation, then subtree sums bottom-up.
    const std::size_t m = tree.nodes.size();
    std::vector<int> local(unit_populations.size(), -1);
    for (std::size_t i = 0; i < m; ++i) local[static_cast<std::size_t>(tree.nodes[i])] = static_cast<int>(i);

    std::vector<std::vector<int>> children(m);
    for (const auto& [p, c] : tree.edges) {
        children[static_cast<std::size_t>(local[static_cast<std::size_t>(p)])].push_back(
            local[static_cast<std::size_t>(c)]);
    }

    std::vector<std::int64_t> subtree(m, 0);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < m; ++i) {
        subtree[i] = unit_populations[static_cast<std::size_t>(tree.nodes[i])];
        total += subtree[i];
    }

    // Iterative post-order from the root.
    std::vector<std::pair<int, std::size_t>> stack{{local[static_cast<std::size_t>(tree.root)], 0}};
    while (!stack.empty()) {
        auto& [node, child_pos] = stack.back();
        if (child_pos < children[static_cast<std::size_t>(node)].size()) {
            int child = children[static_cast<std::size_t>(node)][child_pos++];
            stack.push_back({child, 0});
        } else {
            stack.pop_back();
            if (!stack.empty()) {
                subtree[static_cast<std::size_t>(stack.back().first)] +=
                    subtree[static_cast<std::size_t>(node)];
            }
        }
    }

    cuts.reserve(tree.edges.size());
    for (const auto& [p, c] : tree.edges) {
        std::int64_t side = subtree[static_cast<std::size_t>(local[static_cast<std::size_t>(c)])];
        cuts.push_back({{p, c}, {side, total - side}});
    }
    return cuts;
}

std::vector<CutCandidate> balanced_cuts(const Tree& tree,
                                        std::span<const std::int64_t> unit_populations,
                                        const Rational& ideal, const Rational& epsilon) {
    const Rational lo = ideal * (Rational(1) - epsilon);
    const Rational hi = ideal * (Rational(1) + epsilon);
    std::vector<CutCandidate> result;
    for (const auto& cut : tree_cuts(tree, unit_populations)) {
        const Rational a(cut.side_populations.first);
        const Rational b(cut.side_populations.second);
        if (a >= lo && a <= hi && b >= lo && b <= hi) result.push_back(cut);
    }
    return result;
}

std::vector<int> cut_side_nodes(const Tree& tree, const CutCandidate& cut) {
    const std::size_t m = tree.nodes.size();
    std::vector<int> local;
    int max_node = 0;
    for (int v : tree.nodes) max_node = std::max(max_node, v);
    local.assign(static_cast<std::size_t>(max_node) + 1, -1);
    for (std::size_t i = 0; i < m; ++i) local[static_cast<std::size_t>(tree.nodes[i])] = static_cast<int>(i);

    std::vector<std::vector<int>> children(m);
    for (const auto& [p, c] : tree.edges) {
        children[static_cast<std::size_t>(local[static_cast<std::size_t>(p)])].push_back(
            local[static_cast<std::size_t>(c)]);
    }

    std::vector<int> side;
    std::vector<int> stack{local[static_cast<std::size_t>(cut.edge.second)]};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        side.push_back(tree.nodes[static_cast<std::size_t>(u)]);
        for (int c : children[static_cast<std::size_t>(u)]) stack.push_back(c);
    }
    std::sort(side.begin(), side.end());
    return side;
}

}  // namespace recom
