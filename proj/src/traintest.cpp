#include "recom/traintest.hpp"

#include <algorithm>

#include "recom/metrics.hpp"

namespace recom {

void SplitConfig::validate(bool require_disjoint) const {
    if (early_ids.empty() || later_ids.empty()) {
        fail(Errc::invalid_config, "early and later election lists must be nonempty");
    }
    if (!(t > Rational(0))) fail(Errc::invalid_config, "threshold t must be > 0");
    if (require_disjoint) {
        for (const auto& e : early_ids) {
            if (std::find(later_ids.begin(), later_ids.end(), e) != later_ids.end()) {
                fail(Errc::invalid_config, "election in both early and later lists: " + e);
            }
        }
    }
}

int proportionality_score(const DualGraph& graph, const Plan& plan,
                          std::span<const std::string> election_ids, const Rational& t) {
    if (!(t > Rational(0))) fail(Errc::invalid_config, "threshold t must be > 0");
    int score = 0;
    for (const auto& e : election_ids) {
        const Rational v = vote_share(graph, e);
        const Rational s = seat_share(district_winners(graph, plan, e));
        if (disprop(s, v).abs() < t) ++score;
    }
    return score;
}

TrainTestAccumulator::TrainTestAccumulator(std::size_t n_early, std::size_t n_later)
    : n_early_(n_early),
      n_later_(n_later),
      counts_(n_early + 1, std::vector<std::int64_t>(n_later + 1, 0)) {}

void TrainTestAccumulator::add(int training_score, int test_score) {
    counts_[static_cast<std::size_t>(training_score)][static_cast<std::size_t>(test_score)] += 1;
    ++total_;
}

TrainTestReport TrainTestAccumulator::finish() const {
    if (total_ == 0) fail(Errc::empty_ensemble, "train/test over an empty ensemble");
    TrainTestReport report;
    report.training_hist.assign(n_early_ + 1, 0);
    for (std::size_t s = 0; s <= n_early_; ++s) {
        ConditionalHistogram bucket;
        bucket.training_score = static_cast<int>(s);
        bucket.test_counts = counts_[s];
        std::int64_t n = 0, weighted = 0;
        for (std::size_t j = 0; j <= n_later_; ++j) {
            n += counts_[s][j];
            weighted += static_cast<std::int64_t>(j) * counts_[s][j];
        }
        report.training_hist[s] = n;
        if (n > 0) bucket.mean_test = static_cast<double>(weighted) / static_cast<double>(n);
        report.buckets.push_back(std::move(bucket));
    }
    return report;
}

TrainTestReport train_test(std::span<const Plan> ensemble, const DualGraph& graph,
                           const SplitConfig& split) {
    split.validate(/*require_disjoint=*/false);
    if (ensemble.empty()) fail(Errc::empty_ensemble, "train/test over an empty ensemble");
    TrainTestAccumulator acc(split.early_ids.size(), split.later_ids.size());
    for (const auto& plan : ensemble) {
        acc.add(proportionality_score(graph, plan, split.early_ids, split.t),
                proportionality_score(graph, plan, split.later_ids, split.t));
    }
    return acc.finish();
}

}  // namespace recom
