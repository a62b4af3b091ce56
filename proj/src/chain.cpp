#include "recom/chain.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "recom/spanning_tree.hpp"

namespace recom {

namespace {

using nlohmann::json;

constexpr char kBase36Digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";

int base36_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    return -1;
}

}  // namespace

void ChainConfig::validate() const {
    if (k < 1) fail(Errc::invalid_config, "k must be >= 1");
    if (steps < 1) fail(Errc::invalid_config, "steps must be >= 1");
    if (epsilon.negative()) fail(Errc::invalid_config, "epsilon must be >= 0");
    if (max_retries_per_step < 1) fail(Errc::invalid_config, "max_retries_per_step must be >= 1");
    if (record_every < 1) fail(Errc::invalid_config, "record_every must be >= 1");
}

ChainConfig ChainConfig::from_json_text(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        fail(Errc::parse_error, "config must be a JSON object");
    }
    ChainConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "k") {
            cfg.k = value.get<int>();
        } else if (key == "epsilon") {
            cfg.epsilon = Rational::from_decimal(value.get<double>());
        } else if (key == "steps") {
            cfg.steps = value.get<std::int64_t>();
        } else if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "max_retries_per_step") {
            cfg.max_retries_per_step = value.get<int>();
        } else if (key == "record_every") {
            cfg.record_every = value.get<std::int64_t>();
        } else {
            fail(Errc::parse_error, "unknown config field: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

ChainConfig ChainConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

namespace {

// Cuts where at least one side can stand alone as a district. Used by
// seeding, where the remainder keeps being split.
struct SeedCut {
    CutCandidate cut;
    bool child_side;  // true: the child subtree becomes the district
};

std::vector<SeedCut> district_cuts(const Tree& tree, std::span<const std::int64_t> pops,
                                   const Rational& lo, const Rational& hi, bool final_split) {
    std::vector<SeedCut> found;
    for (const auto& cut : tree_cuts(tree, pops)) {
        const Rational a(cut.side_populations.first);
        const Rational b(cut.side_populations.second);
        const bool a_ok = a >= lo && a <= hi;
        const bool b_ok = b >= lo && b <= hi;
        if (final_split) {
            if (a_ok && b_ok) found.push_back({cut, true});
        } else {
            if (a_ok) found.push_back({cut, true});
            if (b_ok) found.push_back({cut, false});
        }
    }
    return found;
}

}  // namespace

Plan seed_plan(const DualGraph& graph, const ChainConfig& config, Rng& rng) {
    config.validate();
    const auto pops = graph.populations();
    const Rational ideal(graph.total_population(), config.k);
    const Rational lo = ideal * (Rational(1) - config.epsilon);
    const Rational hi = ideal * (Rational(1) + config.epsilon);

    Plan plan;
    plan.k = config.k;
    plan.assignment.assign(static_cast<std::size_t>(graph.n_units()), config.k - 1);
    if (config.k == 1) return plan;

    std::vector<int> remaining(static_cast<std::size_t>(graph.n_units()));
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<int>(i);

    for (int d = 0; d < config.k - 1; ++d) {
        const bool final_split = (d == config.k - 2);
        bool placed = false;
        for (int attempt = 0; attempt < config.max_retries_per_step; ++attempt) {
            Tree tree = wilson_ust(graph, remaining, rng);
            auto cuts = district_cuts(tree, pops, lo, hi, final_split);
            if (cuts.empty()) continue;

            const SeedCut& pick = cuts[rng.index(cuts.size())];
            std::vector<int> side = cut_side_nodes(tree, pick.cut);
            std::vector<int> rest;
            rest.reserve(remaining.size() - side.size());
            std::set_difference(remaining.begin(), remaining.end(), side.begin(), side.end(),
                                std::back_inserter(rest));

            const std::vector<int>& district = pick.child_side ? side : rest;
            const std::vector<int>& leftover = pick.child_side ? rest : side;
            for (int v : district) plan.assignment[static_cast<std::size_t>(v)] = d;
            if (final_split) {
                for (int v : leftover) plan.assignment[static_cast<std::size_t>(v)] = d + 1;
            }
            remaining = leftover;
            placed = true;
            break;
        }
        if (!placed) {
            fail(Errc::seeding_failed,
                 "no balanced split found for district " + std::to_string(d) + " after " +
                     std::to_string(config.max_retries_per_step) + " trees");
        }
    }
    validate_plan(graph, plan);
    return plan;
}

Plan recom_step(const DualGraph& graph, const Plan& plan, const ChainConfig& config, Rng& rng,
                RunSummary* stats) {
    const auto pops = graph.populations();
    const Rational ideal(graph.total_population(), config.k);
    // Each side of the merged region must land within epsilon of the
    // statewide ideal, preserving the plan-level balance guarantee.
    const std::int64_t budget =
        static_cast<std::int64_t>(10) * config.max_retries_per_step;
    std::int64_t draws = 0;

    while (draws < budget) {
        // Cut-edge district selection: a uniform cut edge picks the pair to
        // merge, weighting pairs by shared boundary length.
        std::vector<std::pair<int, int>> cut_edges;
        for (const auto& [a, b] : graph.edges()) {
            if (plan.assignment[static_cast<std::size_t>(a)] !=
                plan.assignment[static_cast<std::size_t>(b)]) {
                cut_edges.push_back({a, b});
            }
        }
        if (cut_edges.empty()) fail(Errc::step_failed, "plan has no cut edges (k must be >= 2)");

        const auto [ea, eb] = cut_edges[rng.index(cut_edges.size())];
        const int da = plan.assignment[static_cast<std::size_t>(ea)];
        const int db = plan.assignment[static_cast<std::size_t>(eb)];

        std::vector<int> merged;
        for (int i = 0; i < graph.n_units(); ++i) {
            const int d = plan.assignment[static_cast<std::size_t>(i)];
            if (d == da || d == db) merged.push_back(i);
        }

        for (int attempt = 0; attempt < config.max_retries_per_step && draws < budget; ++attempt) {
            Tree tree = wilson_ust(graph, merged, rng);
            ++draws;
            if (stats) ++stats->tree_draws;
            auto cuts = balanced_cuts(tree, pops, ideal, config.epsilon);
            if (cuts.empty()) {
                if (stats) ++stats->retries;
                continue;
            }
            const CutCandidate& cut = cuts[rng.index(cuts.size())];
            const bool child_gets_da = rng.coin();

            Plan next = plan;
            std::vector<int> side = cut_side_nodes(tree, cut);
            std::vector<char> in_side(static_cast<std::size_t>(graph.n_units()), 0);
            for (int v : side) in_side[static_cast<std::size_t>(v)] = 1;
            for (int v : merged) {
                const bool child = in_side[static_cast<std::size_t>(v)] != 0;
                next.assignment[static_cast<std::size_t>(v)] =
                    (child == child_gets_da) ? da : db;
            }
            return next;
        }
        // This merged region was a dead end; re-select a cut edge.
    }
    fail(Errc::step_failed,
         "no balanced recombination found within " + std::to_string(budget) + " tree draws");
}

RunSummary run_chain(const DualGraph& graph, const Plan& start, const ChainConfig& config,
                     const RecordSink& sink, Rng& rng) {
    config.validate();
    validate_plan(graph, start);
    if (!plan_balanced(graph, start, config.epsilon)) {
        fail(Errc::unbalanced_district, "start plan violates the population tolerance");
    }

    RunSummary summary;
    const auto t0 = std::chrono::steady_clock::now();

    Plan current = start;
    for (std::int64_t step = 1; step <= config.steps; ++step) {
        current = recom_step(graph, current, config, rng, &summary);
        summary.steps_completed = step;
        if (step % config.record_every == 0) {
            sink(EnsembleRecord{step, current.assignment});
            ++summary.records_emitted;
        }
    }

    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

RunSummary run_chain(const DualGraph& graph, const Plan& start, const ChainConfig& config,
                     const RecordSink& sink) {
    Rng rng(config.seed);
    return run_chain(graph, start, config, sink, rng);
}

// --- Ensemble files ------------------------------------------------------

std::string encode_record(const EnsembleRecord& record, int k, EnsembleFormat format) {
    if (format == EnsembleFormat::base36) {
        if (k > 36) fail(Errc::invalid_config, "base36 ensemble format requires k <= 36");
        std::string line = std::to_string(record.step_index);
        line.push_back(',');
        for (int d : record.assignment) line.push_back(kBase36Digits[d]);
        return line;
    }
    json j{{"step", record.step_index}, {"assign", record.assignment}};
    return j.dump();
}

EnsembleRecord decode_record(std::string_view line) {
    EnsembleRecord record;
    if (!line.empty() && line.front() == '{') {
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("step") || !j.contains("assign") ||
            j.size() != 2 || !j["assign"].is_array()) {
            fail(Errc::parse_error, "ensemble record must be {\"step\":n,\"assign\":[...]}");
        }
        record.step_index = j["step"].get<std::int64_t>();
        for (const auto& v : j["assign"]) {
            if (!v.is_number_integer() || v.get<int>() < 0) {
                fail(Errc::parse_error, "ensemble assignment entries must be integers >= 0");
            }
            record.assignment.push_back(v.get<int>());
        }
        return record;
    }
    auto comma = line.find(',');
    if (comma == std::string_view::npos) {
        fail(Errc::parse_error, "ensemble record must be 'step,assignment'");
    }
    try {
        record.step_index = std::stoll(std::string(line.substr(0, comma)));
    } catch (const std::exception&) {
        fail(Errc::parse_error, "ensemble record has a non-integer step index");
    }
    record.assignment.reserve(line.size() - comma - 1);
    for (char c : line.substr(comma + 1)) {
        int v = base36_value(c);
        if (v < 0) fail(Errc::parse_error, std::string("invalid base36 digit: ") + c);
        record.assignment.push_back(v);
    }
    return record;
}

struct EnsembleWriter::Impl {
    std::ofstream out;
    int k = 0;
    EnsembleFormat format = EnsembleFormat::base36;
};

EnsembleWriter::EnsembleWriter(const std::string& path, int k)
    : EnsembleWriter(path, k, k <= 36 ? EnsembleFormat::base36 : EnsembleFormat::jsonl) {}

EnsembleWriter::EnsembleWriter(const std::string& path, int k, EnsembleFormat format)
    : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        fail(Errc::io_error, "cannot open ensemble file for writing: " + path);
    }
    impl_->k = k;
    impl_->format = format;
}

EnsembleWriter::~EnsembleWriter() { delete impl_; }

void EnsembleWriter::write(const EnsembleRecord& record) {
    impl_->out << encode_record(record, impl_->k, impl_->format) << '\n';
    if (!impl_->out) fail(Errc::io_error, "ensemble write failed");
}

void EnsembleWriter::close() {
    impl_->out.close();
    if (impl_->out.fail()) fail(Errc::io_error, "ensemble close failed");
}

std::int64_t for_each_record(const std::string& path,
                             const std::function<void(const EnsembleRecord&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open ensemble file: " + path);
    std::string line;
    std::int64_t count = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        fn(decode_record(line));
        ++count;
    }
    return count;
}

std::vector<EnsembleRecord> read_ensemble(const std::string& path) {
    std::vector<EnsembleRecord> records;
    for_each_record(path, [&](const EnsembleRecord& r) { records.push_back(r); });
    return records;
}

std::vector<Plan> load_ensemble_plans(const std::string& path, const DualGraph& graph, int k) {
    auto records = read_ensemble(path);
    if (records.empty()) fail(Errc::empty_ensemble, "ensemble file has no records: " + path);

    int max_d = 0;
    for (const auto& r : records) {
        if (static_cast<int>(r.assignment.size()) != graph.n_units()) {
            fail(Errc::missing_unit, "ensemble record does not assign every unit");
        }
        for (int d : r.assignment) max_d = std::max(max_d, d);
    }
    if (k == 0) k = max_d + 1;

    std::vector<Plan> plans;
    plans.reserve(records.size());
    for (auto& r : records) {
        plans.push_back(plan_from_assignment(graph, std::move(r.assignment), k));
    }
    return plans;
}

}  // namespace recom
