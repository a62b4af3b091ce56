#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recom/graph.hpp"
#include "recom/metrics.hpp"
#include "recom/rational.hpp"

namespace recom {

enum class Mark { check, plus, minus };

const char* mark_symbol(Mark m);  // "✓", "+", "-"

enum class ThresholdRule { ftv, fixed };

// The four designated elections, the fairness standard setting the target,
// and the near-target threshold rule.
struct FtvConfig {
    std::array<std::string, 4> election_ids;
    Standard standard;
    ThresholdRule rule = ThresholdRule::ftv;
    Rational fixed_t = Rational(7, 100);  // used when rule == fixed

    void validate() const;
    Rational threshold(int k) const;
};

struct FtvResult {
    std::array<Mark, 4> marks{};
    int score = 0;        // number of checks
    bool pass = false;    // score >= 3
};

struct BreakdownReport {
    std::array<std::int64_t, 5> counts{};  // indexed by score 0..4
    std::array<double, 5> shares{};
    std::int64_t total = 0;
};

struct PercentileReport {
    std::int64_t plan_ordinal = 0;  // position in the ensemble order
    FtvResult result;
    std::array<Mark, 4> modal_marks{};  // most common mark vector at that score
};

// max(0.07, 1/k), compared exactly.
Rational ftv_threshold(int k);

// Per-election means keyed by election id; required exactly when the
// standard is ensemble_mean.
using EnsembleMeans = std::map<std::string, Rational>;

// Precomputes V and the per-election targets once, then scores plans.
class FtvScorer {
  public:
    FtvScorer(const DualGraph& graph, FtvConfig config,
              const std::optional<EnsembleMeans>& ensemble_means = std::nullopt);

    FtvResult score(const Plan& plan) const;
    FtvResult score_from_seats(std::span<const int> r_seats, int k) const;

    const Rational& threshold_for(int k) const;

  private:
    const DualGraph& graph_;
    FtvConfig config_;
    std::array<Rational, 4> targets_;
    mutable std::optional<std::pair<int, Rational>> threshold_cache_;
};

// Marks, score and verdict for one plan. |deviation| must be strictly below
// the threshold to earn a check; otherwise the sign of the deviation sets
// the +/- mark.
FtvResult evaluate(const DualGraph& graph, const Plan& plan, const FtvConfig& config,
                   const std::optional<EnsembleMeans>& ensemble_means = std::nullopt);

BreakdownReport breakdown(std::span<const Plan> ensemble, const DualGraph& graph,
                          const FtvConfig& config,
                          const std::optional<EnsembleMeans>& ensemble_means = std::nullopt);

// Tally of per-plan results into a score breakdown; order-independent.
class BreakdownAccumulator {
  public:
    void add(const FtvResult& result);
    BreakdownReport finish() const;  // throws empty_ensemble when empty

  private:
    std::array<std::int64_t, 5> counts_{};
};

// Plans ranked by score descending (ties by ensemble order); the plan at
// index ceil(p*N)-1 is reported together with the modal mark vector among
// plans sharing its score (mode ties broken lexicographically, check < plus
// < minus).
PercentileReport percentile_report(std::span<const Plan> ensemble, const DualGraph& graph,
                                   const FtvConfig& config, const Rational& percentile,
                                   const std::optional<EnsembleMeans>& ensemble_means = std::nullopt);

PercentileReport percentile_from_results(std::span<const FtvResult> results,
                                         const Rational& percentile);

}  // namespace recom
