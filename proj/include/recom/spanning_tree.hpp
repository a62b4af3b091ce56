#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "recom/graph.hpp"
#include "recom/rational.hpp"
#include "recom/rng.hpp"

namespace recom {

// Spanning tree of an induced subgraph, rooted at the lexicographically
// smallest node of its subset. Edges are (parent, child) pairs in the
// rooted orientation; |edges| == |nodes| - 1.
struct Tree {
    std::vector<int> nodes;                     // sorted graph indices
    std::vector<std::pair<int, int>> edges;     // (parent, child)
    int root = -1;
};

// A tree edge whose removal splits the tree into two components.
// side_populations = (child-side subtree, remainder).
struct CutCandidate {
    std::pair<int, int> edge;  // (parent, child)
    std::pair<std::int64_t, std::int64_t> side_populations;
};

// Uniform spanning tree of the subgraph induced by node_subset, by Wilson's
// loop-erased random walk. The walk is confined to the subset and picks
// neighbors uniformly; traversal order is by unit index so a fixed seed
// replays exactly.
Tree wilson_ust(const DualGraph& graph, std::span<const int> node_subset, Rng& rng);

// Exact spanning tree count of the induced subgraph via the matrix-tree
// theorem (Laplacian cofactor determinant over big integers). Guarded to
// subsets of at most 64 nodes; an oracle and plan statistic, not chain
// machinery.
inline constexpr int kSpanningTreeCountGuard = 64;
mpz_class count_spanning_trees(const DualGraph& graph, std::span<const int> node_subset);

// Per-district spanning tree counts; the product is the plan's
// spanning-tree compactness score.
std::vector<mpz_class> spanning_tree_score(const DualGraph& graph, const Plan& plan);

// Every cut of the tree with both side populations, in a canonical order
// (ascending child node index). One traversal via subtree sums.
std::vector<CutCandidate> tree_cuts(const Tree& tree,
                                    std::span<const std::int64_t> unit_populations);

// The cuts whose two sides both fall inside [ideal*(1-eps), ideal*(1+eps)].
// Empty result means "no balanced cut in this tree".
std::vector<CutCandidate> balanced_cuts(const Tree& tree,
                                        std::span<const std::int64_t> unit_populations,
                                        const Rational& ideal, const Rational& epsilon);

// Nodes on the child side of a cut (the subtree under edge.second).
std::vector<int> cut_side_nodes(const Tree& tree, const CutCandidate& cut);

}  // namespace recom
