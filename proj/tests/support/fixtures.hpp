#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "recom/graph.hpp"

namespace recom::testing {

// Unit ids "a00".."axy" keep lexicographic order equal to numeric order for
// up to 26*100 units, so graph indices match construction order.
inline std::string grid_id(int i) {
    std::string id = "a";
    id.push_back(static_cast<char>('0' + (i / 10) % 10));
    id.push_back(static_cast<char>('0' + i % 10));
    if (i >= 100) id.insert(1, 1, static_cast<char>('a' + i / 100));
    return id;
}

// rows x cols grid, unit population 1, no elections.
inline DualGraph make_grid(int rows, int cols) {
    std::vector<UnitSpec> units;
    std::vector<std::pair<std::string, std::string>> edges;
    auto at = [cols](int r, int c) { return grid_id(r * cols + c); };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            units.push_back({at(r, c), 1, {}});
            if (c + 1 < cols) edges.push_back({at(r, c), at(r, c + 1)});
            if (r + 1 < rows) edges.push_back({at(r, c), at(r + 1, c)});
        }
    }
    return DualGraph::build(std::move(units), edges);
}

// Path graph a00 - a01 - ... with the given populations.
inline DualGraph make_path(const std::vector<std::int64_t>& pops) {
    std::vector<UnitSpec> units;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < pops.size(); ++i) {
        units.push_back({grid_id(static_cast<int>(i)), pops[i], {}});
        if (i + 1 < pops.size()) {
            edges.push_back({grid_id(static_cast<int>(i)), grid_id(static_cast<int>(i + 1))});
        }
    }
    return DualGraph::build(std::move(units), edges);
}

// Arbitrary small graph from an edge list on n unit ids, uniform pop 1.
inline DualGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<UnitSpec> units;
    for (int i = 0; i < n; ++i) units.push_back({grid_id(i), 1, {}});
    std::vector<std::pair<std::string, std::string>> named;
    named.reserve(edges.size());
    for (const auto& [a, b] : edges) named.push_back({grid_id(a), grid_id(b)});
    return DualGraph::build(std::move(units), named);
}

// Graph with per-unit (R, D) tallies for named elections.
// tallies[election][unit] = {R, D}.
inline DualGraph make_graph_with_votes(
    int n, const std::vector<std::pair<int, int>>& edges,
    const std::vector<std::pair<std::string,
                                std::vector<std::pair<std::int64_t, std::int64_t>>>>& tallies,
    const std::vector<std::int64_t>& pops = {}) {
    std::vector<UnitSpec> units;
    for (int i = 0; i < n; ++i) {
        UnitSpec spec;
        spec.id = grid_id(i);
        spec.population = pops.empty() ? 1 : pops[static_cast<std::size_t>(i)];
        for (const auto& [election, per_unit] : tallies) {
            spec.votes.push_back({election, per_unit[static_cast<std::size_t>(i)]});
        }
        units.push_back(std::move(spec));
    }
    std::vector<std::pair<std::string, std::string>> named;
    named.reserve(edges.size());
    for (const auto& [a, b] : edges) named.push_back({grid_id(a), grid_id(b)});
    return DualGraph::build(std::move(units), named);
}

// An election realized on a k-unit path so that the identity plan (unit i ->
// district i) yields exactly `r_seats` R districts and the statewide share
// equals `v_share` exactly. Requires 0 < r_seats < k.
struct SeatsColumn {
    std::string election;
    Rational v_share;
    int r_seats;
};

inline DualGraph make_seats_graph(int k, const std::vector<SeatsColumn>& columns) {
    std::vector<std::pair<std::string, std::vector<std::pair<std::int64_t, std::int64_t>>>>
        tallies;
    for (const auto& col : columns) {
        const std::int64_t r_total = col.v_share.num() * k;
        const std::int64_t d_total = (col.v_share.den() - col.v_share.num()) * k;
        const int s = col.r_seats;
        std::vector<std::pair<std::int64_t, std::int64_t>> per_unit(
            static_cast<std::size_t>(k), {0, 0});
        for (int i = 0; i < s; ++i) {
            per_unit[static_cast<std::size_t>(i)].first = r_total / s + (i < r_total % s ? 1 : 0);
        }
        for (int i = s; i < k; ++i) {
            per_unit[static_cast<std::size_t>(i)].second =
                d_total / (k - s) + (i - s < d_total % (k - s) ? 1 : 0);
        }
        tallies.push_back({col.election, std::move(per_unit)});
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < k; ++i) edges.push_back({i - 1, i});
    return make_graph_with_votes(k, edges, tallies);
}

inline Plan identity_plan(const DualGraph& g) {
    std::vector<int> assignment(static_cast<std::size_t>(g.n_units()));
    for (int i = 0; i < g.n_units(); ++i) assignment[static_cast<std::size_t>(i)] = i;
    return plan_from_assignment(g, std::move(assignment), g.n_units());
}

}  // namespace recom::testing
