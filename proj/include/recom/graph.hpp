#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recom/errors.hpp"
#include "recom/rational.hpp"

namespace recom {

// One geographic unit: id, population, and (R, D) tallies per election,
// aligned with DualGraph::elections().
struct Unit {
    std::string id;
    std::int64_t population = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> votes;
};

// Input description of a unit, with votes keyed by election id.
struct UnitSpec {
    std::string id;
    std::int64_t population = 0;
    std::vector<std::pair<std::string, std::pair<std::int64_t, std::int64_t>>> votes;
};

// Adjacency graph of units. Immutable once constructed; units are stored in
// lexicographic id order and all indices below refer to that order.
class DualGraph {
  public:
    static DualGraph load(const std::string& path);
    static DualGraph from_json_text(std::string_view text);
    static DualGraph build(std::vector<UnitSpec> units,
                           const std::vector<std::pair<std::string, std::string>>& edges);

    int n_units() const { return static_cast<int>(units_.size()); }
    const Unit& unit(int i) const { return units_[static_cast<std::size_t>(i)]; }
    const std::vector<Unit>& units() const { return units_; }

    // Index of a unit id, or throws unknown_unit.
    int index_of(std::string_view id) const;

    const std::vector<std::string>& elections() const { return elections_; }
    int election_index(std::string_view id) const;  // throws unknown_election

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::span<const int> neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }

    std::int64_t total_population() const { return total_population_; }
    std::vector<std::int64_t> populations() const;

    // Canonical serialization; load(write(g)) reproduces an equal graph.
    std::string to_json_text() const;
    void save(const std::string& path) const;

  private:
    DualGraph() = default;
    void finalize();  // sorts, validates invariants

    std::vector<Unit> units_;
    std::vector<std::string> elections_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::int64_t total_population_ = 0;
};

// Assignment of every unit (by graph index) to a district in [0, k).
struct Plan {
    std::vector<int> assignment;
    int k = 0;
};

// Structural validation: size, range, nonempty districts, contiguity.
// Population balance is checked separately against a caller-chosen epsilon.
void validate_plan(const DualGraph& graph, const Plan& plan);

Plan plan_from_assignment(const DualGraph& graph, std::vector<int> assignment, int k);

// CSV with header "unit_id,district". k = 0 infers the district count as
// 1 + the largest index in the file.
Plan load_plan(const std::string& path, const DualGraph& graph, int k);
Plan plan_from_csv_text(std::string_view text, const DualGraph& graph, int k);
void save_plan(const std::string& path, const DualGraph& graph, const Plan& plan);

std::vector<std::int64_t> district_populations(const DualGraph& graph, const Plan& plan);

// True iff every entry deviates from ideal (= total/k) by at most
// epsilon * ideal, boundary inclusive.
bool check_population_balance(std::span<const std::int64_t> populations, int k,
                              const Rational& epsilon);

bool plan_balanced(const DualGraph& graph, const Plan& plan, const Rational& epsilon);

// True iff the units of `subset` induce a connected subgraph.
bool subset_connected(const DualGraph& graph, std::span<const int> subset);

}  // namespace recom
