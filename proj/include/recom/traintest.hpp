#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recom/graph.hpp"
#include "recom/rational.hpp"

namespace recom {

// Early/later election split for the predictive analysis. The CLI enforces
// disjoint lists; the library accepts overlapping ones so self-consistency
// diagnostics (later == early) can run.
struct SplitConfig {
    std::vector<std::string> early_ids;
    std::vector<std::string> later_ids;
    Rational t = Rational(7, 100);

    void validate(bool require_disjoint = true) const;
};

struct ConditionalHistogram {
    int training_score = 0;
    std::vector<std::int64_t> test_counts;  // indexed by test score 0..|later|
    std::optional<double> mean_test;        // absent for empty buckets
};

struct TrainTestReport {
    std::vector<std::int64_t> training_hist;  // indexed by training score 0..|early|
    std::vector<ConditionalHistogram> buckets;
};

// Number of elections with |disprop| strictly below t.
int proportionality_score(const DualGraph& graph, const Plan& plan,
                          std::span<const std::string> election_ids, const Rational& t);

TrainTestReport train_test(std::span<const Plan> ensemble, const DualGraph& graph,
                           const SplitConfig& split);

// Streaming accumulation (one pass over an ensemble file).
class TrainTestAccumulator {
  public:
    TrainTestAccumulator(std::size_t n_early, std::size_t n_later);
    void add(int training_score, int test_score);
    TrainTestReport finish() const;  // throws empty_ensemble when empty

  private:
    std::size_t n_early_;
    std::size_t n_later_;
    std::vector<std::vector<std::int64_t>> counts_;  // [training][test]
    std::int64_t total_ = 0;
};

}  // namespace recom
