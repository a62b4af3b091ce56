#include "recom/ftv.hpp"

#include <algorithm>

namespace recom {

const char* mark_symbol(Mark m) {
    switch (m) {
        case Mark::check: return "✓";
        case Mark::plus: return "+";
        case Mark::minus: return "-";
    }
    return "?";
}

void FtvConfig::validate() const {
    for (const auto& id : election_ids) {
        if (id.empty()) fail(Errc::invalid_config, "FTV requires exactly four election ids");
    }
    // The ensemble_mean standard gets its per-election shares at scoring
    // time, so only the slope is checked here.
    if (!(standard.slope > Rational(0))) {
        fail(Errc::invalid_config, "standard slope must be > 0");
    }
    if (rule == ThresholdRule::fixed && !(fixed_t > Rational(0))) {
        fail(Errc::invalid_config, "fixed threshold must be > 0");
    }
}

Rational FtvConfig::threshold(int k) const {
    if (rule == ThresholdRule::fixed) return fixed_t;
    return ftv_threshold(k);
}

Rational ftv_threshold(int k) {
    if (k < 1) fail(Errc::invalid_config, "k must be >= 1");
    const Rational seven(7, 100);
    const Rational one_seat(1, k);
    return one_seat > seven ? one_seat : seven;
}

FtvScorer::FtvScorer(const DualGraph& graph, FtvConfig config,
                     const std::optional<EnsembleMeans>& ensemble_means)
    : graph_(graph), config_(std::move(config)) {
    config_.validate();
    const bool wants_means = config_.standard.kind == StandardKind::ensemble_mean;
    if (wants_means && !ensemble_means) {
        fail(Errc::missing_ensemble_mean,
             "the ensemble_mean standard needs per-election ensemble means");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const Rational v = vote_share(graph_, config_.election_ids[i]);
        Standard standard = config_.standard;
        if (wants_means) {
            auto it = ensemble_means->find(config_.election_ids[i]);
            if (it == ensemble_means->end()) {
                fail(Errc::missing_ensemble_mean,
                     "no ensemble mean supplied for election: " + config_.election_ids[i]);
            }
            standard.ensemble_mean_share = it->second;
        }
        targets_[i] = target_share(standard, v);
    }
}

const Rational& FtvScorer::threshold_for(int k) const {
    if (!threshold_cache_ || threshold_cache_->first != k) {
        threshold_cache_ = {k, config_.threshold(k)};
    }
    return threshold_cache_->second;
}

FtvResult FtvScorer::score_from_seats(std::span<const int> r_seats, int k) const {
    const Rational& t = threshold_for(k);
    FtvResult result;
    for (std::size_t i = 0; i < 4; ++i) {
        const Rational s(r_seats[i], k);
        const Rational dev = s - targets_[i];
        // Strict inequality: |dev| == t fails, on the favored side.
        if (dev.abs() < t) {
            result.marks[i] = Mark::check;
            ++result.score;
        } else {
            result.marks[i] = dev.negative() ? Mark::minus : Mark::plus;
        }
    }
    result.pass = result.score >= 3;
    return result;
}

FtvResult FtvScorer::score(const Plan& plan) const {
    std::array<int, 4> seats{};
    for (std::size_t i = 0; i < 4; ++i) {
        seats[i] = count_r_seats(district_winners(graph_, plan, config_.election_ids[i]));
    }
    return score_from_seats(seats, plan.k);
}

FtvResult evaluate(const DualGraph& graph, const Plan& plan, const FtvConfig& config,
                   const std::optional<EnsembleMeans>& ensemble_means) {
    return FtvScorer(graph, config, ensemble_means).score(plan);
}

void BreakdownAccumulator::add(const FtvResult& result) {
    counts_[static_cast<std::size_t>(result.score)] += 1;
}

BreakdownReport BreakdownAccumulator::finish() const {
    BreakdownReport report;
    report.counts = counts_;
    for (auto c : counts_) report.total += c;
    if (report.total == 0) fail(Errc::empty_ensemble, "breakdown of an empty ensemble");
    for (std::size_t i = 0; i < 5; ++i) {
        report.shares[i] =
            static_cast<double>(report.counts[i]) / static_cast<double>(report.total);
    }
    return report;
}

BreakdownReport breakdown(std::span<const Plan> ensemble, const DualGraph& graph,
                          const FtvConfig& config,
                          const std::optional<EnsembleMeans>& ensemble_means) {
    if (ensemble.empty()) fail(Errc::empty_ensemble, "breakdown of an empty ensemble");
    FtvScorer scorer(graph, config, ensemble_means);
    BreakdownAccumulator acc;
    for (const auto& plan : ensemble) acc.add(scorer.score(plan));
    return acc.finish();
}

namespace {

// check < plus < minus, per the documented tie-break.
int mark_rank(Mark m) {
    switch (m) {
        case Mark::check: return 0;
        case Mark::plus: return 1;
        case Mark::minus: return 2;
    }
    return 3;
}

bool marks_less(const std::array<Mark, 4>& a, const std::array<Mark, 4>& b) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (mark_rank(a[i]) != mark_rank(b[i])) return mark_rank(a[i]) < mark_rank(b[i]);
    }
    return false;
}

}  // namespace

PercentileReport percentile_from_results(std::span<const FtvResult> results,
                                         const Rational& percentile) {
    if (results.empty()) fail(Errc::empty_ensemble, "percentile of an empty ensemble");
    if (!(percentile > Rational(0)) || !(percentile < Rational(1))) {
        fail(Errc::invalid_config, "percentile must lie strictly between 0 and 1");
    }

    const std::int64_t n = static_cast<std::int64_t>(results.size());
    std::vector<std::int64_t> order(results.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int64_t>(i);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        return results[static_cast<std::size_t>(a)].score >
               results[static_cast<std::size_t>(b)].score;
    });

    // index = ceil(p*N) - 1, in exact arithmetic.
    const auto num = static_cast<__int128>(percentile.num()) * n;
    const auto den = static_cast<__int128>(percentile.den());
    std::int64_t rank = static_cast<std::int64_t>((num + den - 1) / den) - 1;
    rank = std::clamp<std::int64_t>(rank, 0, n - 1);

    PercentileReport report;
    report.plan_ordinal = order[static_cast<std::size_t>(rank)];
    report.result = results[static_cast<std::size_t>(report.plan_ordinal)];

    // Modal mark vector among all plans sharing the selected score.
    std::map<std::array<Mark, 4>, std::int64_t,
             bool (*)(const std::array<Mark, 4>&, const std::array<Mark, 4>&)>
        freq(marks_less);
    for (const auto& r : results) {
        if (r.score == report.result.score) freq[r.marks] += 1;
    }
    std::int64_t best = -1;
    for (const auto& [marks, count] : freq) {
        if (count > best) {  // map iterates in tie-break order already
            best = count;
            report.modal_marks = marks;
        }
    }
    return report;
}

PercentileReport percentile_report(std::span<const Plan> ensemble, const DualGraph& graph,
                                   const FtvConfig& config, const Rational& percentile,
                                   const std::optional<EnsembleMeans>& ensemble_means) {
    if (ensemble.empty()) fail(Errc::empty_ensemble, "percentile of an empty ensemble");
    FtvScorer scorer(graph, config, ensemble_means);
    std::vector<FtvResult> results;
    results.reserve(ensemble.size());
    for (const auto& plan : ensemble) results.push_back(scorer.score(plan));
    return percentile_from_results(results, percentile);
}

}  // namespace recom
