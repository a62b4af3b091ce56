#include "recom/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace recom {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot open file for writing: " + path);
    out << text;
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

std::int64_t require_count(const json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        fail(Errc::parse_error, what + " must be a non-negative integer");
    }
    return j.get<std::int64_t>();
}

}  // namespace

int DualGraph::index_of(std::string_view id) const {
    auto it = std::lower_bound(units_.begin(), units_.end(), id,
                               [](const Unit& u, std::string_view v) { return u.id < v; });
    if (it == units_.end() || it->id != id) {
        fail(Errc::unknown_unit, "unknown unit id: " + std::string(id));
    }
    return static_cast<int>(it - units_.begin());
}

int DualGraph::election_index(std::string_view id) const {
    auto it = std::lower_bound(elections_.begin(), elections_.end(), id);
    if (it == elections_.end() || *it != id) {
        fail(Errc::unknown_election, "unknown election id: " + std::string(id));
    }
    return static_cast<int>(it - elections_.begin());
}

std::vector<std::int64_t> DualGraph::populations() const {
    std::vector<std::int64_t> pops(units_.size());
    for (std::size_t i = 0; i < units_.size(); ++i) pops[i] = units_[i].population;
    return pops;
}

void DualGraph::finalize() {
    if (units_.empty()) fail(Errc::parse_error, "graph has no units");

    std::sort(units_.begin(), units_.end(),
              [](const Unit& a, const Unit& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < units_.size(); ++i) {
        if (units_[i].id == units_[i - 1].id) {
            fail(Errc::parse_error, "duplicate unit id: " + units_[i].id);
        }
    }

    adj_.assign(units_.size(), {});
    std::set<std::pair<int, int>> seen;
    for (auto& [a, b] : edges_) {
        if (a == b) fail(Errc::self_loop, "self-loop on unit: " + units_[a].id);
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) {
            fail(Errc::duplicate_edge,
                 "duplicate edge: " + units_[a].id + " -- " + units_[b].id);
        }
    }
    std::sort(edges_.begin(), edges_.end());
    for (const auto& [a, b] : edges_) {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());

    total_population_ = 0;
    for (const auto& u : units_) total_population_ += u.population;

    std::vector<int> all(units_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    if (!subset_connected(*this, all)) {
        fail(Errc::disconnected_graph, "dual graph is not connected");
    }
}

DualGraph DualGraph::build(std::vector<UnitSpec> specs,
                           const std::vector<std::pair<std::string, std::string>>& edges) {
    DualGraph g;
    if (specs.empty()) fail(Errc::parse_error, "graph has no units");

    // All units must carry the identical election set.
    std::vector<std::string> elections;
    for (const auto& [id, tallies] : specs.front().votes) {
        (void)tallies;
        elections.push_back(id);
    }
    std::sort(elections.begin(), elections.end());
    if (std::adjacent_find(elections.begin(), elections.end()) != elections.end()) {
        fail(Errc::parse_error, "duplicate election id on unit: " + specs.front().id);
    }

    g.elections_ = elections;
    g.units_.reserve(specs.size());
    for (auto& spec : specs) {
        Unit u;
        u.id = spec.id;
        if (spec.population < 0) {
            fail(Errc::parse_error, "negative population on unit: " + spec.id);
        }
        u.population = spec.population;

        std::sort(spec.votes.begin(), spec.votes.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        auto ids_match = spec.votes.size() == elections.size() &&
                         std::equal(elections.begin(), elections.end(), spec.votes.begin(),
                                    [](const std::string& e, const auto& v) { return e == v.first; });
        if (!ids_match) {
            fail(Errc::inconsistent_elections,
                 "unit " + spec.id + " does not carry the common election set");
        }
        for (const auto& [eid, rd] : spec.votes) {
            if (rd.first < 0 || rd.second < 0) {
                fail(Errc::parse_error, "negative vote count on unit " + spec.id + ", " + eid);
            }
            u.votes.push_back(rd);
        }
        g.units_.push_back(std::move(u));
    }

    std::sort(g.units_.begin(), g.units_.end(),
              [](const Unit& a, const Unit& b) { return a.id < b.id; });
    std::unordered_map<std::string_view, int> index;
    index.reserve(g.units_.size());
    for (std::size_t i = 0; i < g.units_.size(); ++i) index[g.units_[i].id] = static_cast<int>(i);

    g.edges_.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end()) fail(Errc::unknown_endpoint, "edge endpoint not a unit: " + a);
        if (ib == index.end()) fail(Errc::unknown_endpoint, "edge endpoint not a unit: " + b);
        g.edges_.push_back({ia->second, ib->second});
    }

    g.finalize();
    return g;
}

DualGraph DualGraph::from_json_text(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(Errc::parse_error, "invalid JSON in graph file");
    if (!doc.is_object() || !doc.contains("units") || !doc.contains("edges") || doc.size() != 2) {
        fail(Errc::parse_error, "graph file must be an object with exactly 'units' and 'edges'");
    }
    if (!doc["units"].is_array() || !doc["edges"].is_array()) {
        fail(Errc::parse_error, "'units' and 'edges' must be arrays");
    }

    std::vector<UnitSpec> specs;
    specs.reserve(doc["units"].size());
    for (const auto& ju : doc["units"]) {
        if (!ju.is_object() || !ju.contains("id") || !ju.contains("pop") ||
            !ju.contains("votes") || ju.size() != 3) {
            fail(Errc::parse_error, "unit must be an object with exactly 'id', 'pop', 'votes'");
        }
        if (!ju["id"].is_string()) fail(Errc::parse_error, "unit id must be a string");
        UnitSpec spec;
        spec.id = ju["id"].get<std::string>();
        spec.population = require_count(ju["pop"], "unit '" + spec.id + "' pop");
        if (!ju["votes"].is_object()) {
            fail(Errc::parse_error, "unit '" + spec.id + "' votes must be an object");
        }
        for (const auto& [eid, tallies] : ju["votes"].items()) {
            // Two-party tallies only; any extra column is an error rather
            // than a silently dropped share of V.
            if (!tallies.is_object() || !tallies.contains("R") || !tallies.contains("D") ||
                tallies.size() != 2) {
                fail(Errc::parse_error, "election '" + eid + "' on unit '" + spec.id +
                                            "' must have exactly R and D tallies");
            }
            spec.votes.push_back({eid,
                                  {require_count(tallies["R"], "R tally"),
                                   require_count(tallies["D"], "D tally")}});
        }
        specs.push_back(std::move(spec));
    }

    std::vector<std::pair<std::string, std::string>> edges;
    edges.reserve(doc["edges"].size());
    for (const auto& je : doc["edges"]) {
        if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string()) {
            fail(Errc::parse_error, "edge must be a pair of unit ids");
        }
        edges.push_back({je[0].get<std::string>(), je[1].get<std::string>()});
    }

    return build(std::move(specs), edges);
}

DualGraph DualGraph::load(const std::string& path) {
    return from_json_text(read_file(path));
}

std::string DualGraph::to_json_text() const {
    json junits = json::array();
    for (const auto& u : units_) {
        json votes = json::object();
        for (std::size_t e = 0; e < elections_.size(); ++e) {
            votes[elections_[e]] = {{"R", u.votes[e].first}, {"D", u.votes[e].second}};
        }
        junits.push_back({{"id", u.id}, {"pop", u.population}, {"votes", votes}});
    }
    json jedges = json::array();
    for (const auto& [a, b] : edges_) {
        jedges.push_back({units_[a].id, units_[b].id});
    }
    return json{{"units", junits}, {"edges", jedges}}.dump();
}

void DualGraph::save(const std::string& path) const {
    write_file(path, to_json_text());
}

bool subset_connected(const DualGraph& graph, std::span<const int> subset) {
    if (subset.empty()) return false;
    std::vector<char> in_subset(static_cast<std::size_t>(graph.n_units()), 0);
    for (int v : subset) in_subset[static_cast<std::size_t>(v)] = 1;

    std::vector<int> stack{subset.front()};
    std::vector<char> seen(static_cast<std::size_t>(graph.n_units()), 0);
    seen[static_cast<std::size_t>(subset.front())] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : graph.neighbors(u)) {
            if (in_subset[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == subset.size();
}

void validate_plan(const DualGraph& graph, const Plan& plan) {
    const int n = graph.n_units();
    if (plan.k < 1) fail(Errc::invalid_config, "plan must have k >= 1");
    if (static_cast<int>(plan.assignment.size()) != n) {
        fail(Errc::missing_unit, "plan does not assign every unit");
    }
    std::vector<std::vector<int>> members(static_cast<std::size_t>(plan.k));
    for (int i = 0; i < n; ++i) {
        int d = plan.assignment[static_cast<std::size_t>(i)];
        if (d < 0 || d >= plan.k) {
            fail(Errc::district_out_of_range,
                 "unit " + graph.unit(i).id + " assigned to district " + std::to_string(d) +
                     " outside 0.." + std::to_string(plan.k - 1));
        }
        members[static_cast<std::size_t>(d)].push_back(i);
    }
    for (int d = 0; d < plan.k; ++d) {
        const auto& m = members[static_cast<std::size_t>(d)];
        if (m.empty()) fail(Errc::empty_district, "district " + std::to_string(d) + " is empty");
        if (!subset_connected(graph, m)) {
            fail(Errc::discontiguous_district,
                 "district " + std::to_string(d) + " is not contiguous");
        }
    }
}

Plan plan_from_assignment(const DualGraph& graph, std::vector<int> assignment, int k) {
    Plan plan{std::move(assignment), k};
    validate_plan(graph, plan);
    return plan;
}

Plan plan_from_csv_text(std::string_view text, const DualGraph& graph, int k) {
    std::vector<int> assignment(static_cast<std::size_t>(graph.n_units()), -1);

    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) fail(Errc::parse_error, "empty plan file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "unit_id,district") {
        fail(Errc::parse_error, "plan file must start with header 'unit_id,district'");
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            fail(Errc::parse_error, "line " + std::to_string(lineno) + ": expected 'unit_id,district'");
        }
        const std::string id = line.substr(0, comma);
        const std::string dtext = line.substr(comma + 1);
        int district = 0;
        try {
            std::size_t used = 0;
            district = std::stoi(dtext, &used, 10);
            if (used != dtext.size()) throw std::invalid_argument(dtext);
        } catch (const std::exception&) {
            fail(Errc::parse_error,
                 "line " + std::to_string(lineno) + ": district is not a base-10 integer");
        }
        int idx = graph.index_of(id);
        if (assignment[static_cast<std::size_t>(idx)] != -1) {
            fail(Errc::parse_error, "line " + std::to_string(lineno) + ": duplicate unit " + id);
        }
        assignment[static_cast<std::size_t>(idx)] = district;
    }

    for (int i = 0; i < graph.n_units(); ++i) {
        if (assignment[static_cast<std::size_t>(i)] == -1) {
            fail(Errc::missing_unit, "plan does not assign unit " + graph.unit(i).id);
        }
    }
    if (k == 0) {
        for (int d : assignment) k = std::max(k, d + 1);
    }
    return plan_from_assignment(graph, std::move(assignment), k);
}

Plan load_plan(const std::string& path, const DualGraph& graph, int k) {
    return plan_from_csv_text(read_file(path), graph, k);
}

void save_plan(const std::string& path, const DualGraph& graph, const Plan& plan) {
    std::ostringstream out;
    out << "unit_id,district\n";
    for (int i = 0; i < graph.n_units(); ++i) {
        out << graph.unit(i).id << ',' << plan.assignment[static_cast<std::size_t>(i)] << '\n';
    }
    write_file(path, out.str());
}

std::vector<std::int64_t> district_populations(const DualGraph& graph, const Plan& plan) {
    std::vector<std::int64_t> pops(static_cast<std::size_t>(plan.k), 0);
    for (int i = 0; i < graph.n_units(); ++i) {
        pops[static_cast<std::size_t>(plan.assignment[static_cast<std::size_t>(i)])] +=
            graph.unit(i).population;
    }
    return pops;
}

bool check_population_balance(std::span<const std::int64_t> populations, int k,
                              const Rational& epsilon) {
    if (k != static_cast<int>(populations.size())) {
        fail(Errc::invalid_config, "k does not match the number of district populations");
    }
    if (epsilon.negative()) fail(Errc::invalid_config, "epsilon must be >= 0");

    std::int64_t total = 0;
    for (auto p : populations) total += p;

    // |p - total/k| <= eps * total/k  <=>  |p*k - total| * eps_den <= eps_num * total
    using i128 = __int128;
    for (auto p : populations) {
        i128 lhs = i128(p) * k - total;
        if (lhs < 0) lhs = -lhs;
        if (lhs * epsilon.den() > i128(epsilon.num()) * total) return false;
    }
    return true;
}

bool plan_balanced(const DualGraph& graph, const Plan& plan, const Rational& epsilon) {
    auto pops = district_populations(graph, plan);
    return check_population_balance(pops, plan.k, epsilon);
}

}  // namespace recom
