#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "recom/graph.hpp"
#include "recom/rational.hpp"
#include "recom/rng.hpp"

namespace recom {

struct ChainConfig {
    int k = 0;
    Rational epsilon = Rational(1, 100);
    std::int64_t steps = 0;
    std::uint64_t seed = 0;
    int max_retries_per_step = 1000;
    std::int64_t record_every = 1;

    void validate() const;
    static ChainConfig from_json_text(std::string_view text);
    static ChainConfig load(const std::string& path);
};

struct EnsembleRecord {
    std::int64_t step_index = 0;
    std::vector<int> assignment;  // by lexicographic unit order
};

struct RunSummary {
    std::int64_t steps_completed = 0;
    std::int64_t records_emitted = 0;
    std::int64_t tree_draws = 0;
    std::int64_t retries = 0;  // tree draws that produced no balanced cut
    double wall_seconds = 0.0;
};

using RecordSink = std::function<void(const EnsembleRecord&)>;

// Initial plan by recursive tree bipartition: draw a UST on the remaining
// region and cut off one district within epsilon of the statewide ideal,
// retrying up to max_retries_per_step trees per split.
Plan seed_plan(const DualGraph& graph, const ChainConfig& config, Rng& rng);

// One recombination move: pick a cut edge uniformly, merge its two
// districts, redraw a UST on the union and split it at a balanced cut.
// Only the two merged districts differ from the input plan.
Plan recom_step(const DualGraph& graph, const Plan& plan, const ChainConfig& config, Rng& rng,
                RunSummary* stats = nullptr);

// Applies recom_step `steps` times from `start`, delivering every
// record_every-th plan to the sink. The overload without an Rng seeds one
// from config.seed; identical (graph, start, config) then replay
// bit-identically.
RunSummary run_chain(const DualGraph& graph, const Plan& start, const ChainConfig& config,
                     const RecordSink& sink, Rng& rng);
RunSummary run_chain(const DualGraph& graph, const Plan& start, const ChainConfig& config,
                     const RecordSink& sink);

// --- Ensemble files ------------------------------------------------------
//
// One record per line. For k <= 36 districts the default format is
//   <step_index>,<base36 digit per unit in lexicographic unit order>
// and for larger k (or on request) JSON lines {"step":n,"assign":[...]}.
// Readers detect the format per line.

enum class EnsembleFormat { base36, jsonl };

class EnsembleWriter {
  public:
    EnsembleWriter(const std::string& path, int k);
    EnsembleWriter(const std::string& path, int k, EnsembleFormat format);
    ~EnsembleWriter();
    EnsembleWriter(const EnsembleWriter&) = delete;
    EnsembleWriter& operator=(const EnsembleWriter&) = delete;

    void write(const EnsembleRecord& record);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

std::string encode_record(const EnsembleRecord& record, int k, EnsembleFormat format);
EnsembleRecord decode_record(std::string_view line);

// Streams records through `fn`; returns the record count.
std::int64_t for_each_record(const std::string& path,
                             const std::function<void(const EnsembleRecord&)>& fn);
std::vector<EnsembleRecord> read_ensemble(const std::string& path);

// Validated plans from an ensemble file; k is inferred as 1 + the largest
// district index unless given.
std::vector<Plan> load_ensemble_plans(const std::string& path, const DualGraph& graph, int k = 0);

}  // namespace recom
