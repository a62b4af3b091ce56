#include "recom/metrics.hpp"

#include <algorithm>

namespace recom {

Standard Standard::efficiency_gap(Rational slope) {
    Standard s;
    s.kind = StandardKind::efficiency_gap;
    s.slope = slope;
    s.validate();
    return s;
}

Standard Standard::ensemble_mean(Rational share) {
    Standard s;
    s.kind = StandardKind::ensemble_mean;
    s.ensemble_mean_share = share;
    s.validate();
    return s;
}

void Standard::validate() const {
    if (slope <= Rational(0)) fail(Errc::invalid_config, "standard slope must be > 0");
    if ((kind == StandardKind::ensemble_mean) != ensemble_mean_share.has_value()) {
        fail(Errc::invalid_config,
             "ensemble_mean_share is required exactly when the standard is ensemble_mean");
    }
}

Rational vote_share(const DualGraph& graph, std::string_view election_id) {
    const int e = graph.election_index(election_id);
    std::int64_t r = 0, d = 0;
    for (const auto& u : graph.units()) {
        r += u.votes[static_cast<std::size_t>(e)].first;
        d += u.votes[static_cast<std::size_t>(e)].second;
    }
    if (r + d == 0) {
        fail(Errc::zero_total_vote, "election has zero total vote: " + std::string(election_id));
    }
    return Rational(r, r + d);
}

std::vector<Party> district_winners(const DualGraph& graph, const Plan& plan,
                                    std::string_view election_id) {
    const int e = graph.election_index(election_id);
    std::vector<std::int64_t> r(static_cast<std::size_t>(plan.k), 0);
    std::vector<std::int64_t> d(static_cast<std::size_t>(plan.k), 0);
    for (int i = 0; i < graph.n_units(); ++i) {
        const auto dist = static_cast<std::size_t>(plan.assignment[static_cast<std::size_t>(i)]);
        r[dist] += graph.unit(i).votes[static_cast<std::size_t>(e)].first;
        d[dist] += graph.unit(i).votes[static_cast<std::size_t>(e)].second;
    }
    std::vector<Party> winners(static_cast<std::size_t>(plan.k));
    for (std::size_t i = 0; i < winners.size(); ++i) {
        winners[i] = r[i] > d[i] ? Party::R : (d[i] > r[i] ? Party::D : Party::Tie);
    }
    return winners;
}

int count_r_seats(std::span<const Party> winners) {
    return static_cast<int>(std::count(winners.begin(), winners.end(), Party::R));
}

Rational seat_share(std::span<const Party> winners) {
    if (winners.empty()) fail(Errc::empty_series, "seat_share of an empty winner vector");
    return Rational(count_r_seats(winners), static_cast<std::int64_t>(winners.size()));
}

Rational disprop(const Rational& seat_share, const Rational& vote_share) {
    return seat_share - vote_share;
}

Rational target_share(const Standard& standard, const Rational& vote_share) {
    standard.validate();
    switch (standard.kind) {
        case StandardKind::proportional:
            return vote_share;
        case StandardKind::efficiency_gap: {
            Rational t = standard.slope * vote_share - Rational(1, 2);
            if (t < Rational(0)) return Rational(0);
            if (t > Rational(1)) return Rational(1);
            return t;
        }
        case StandardKind::ensemble_mean:
            return *standard.ensemble_mean_share;
    }
    fail(Errc::invalid_config, "unknown standard kind");
}

Rational deviation_from_target(const Rational& seat_share, const Standard& standard,
                               const Rational& vote_share) {
    return seat_share - target_share(standard, vote_share);
}

std::vector<Rational> disprop_series(const DualGraph& graph, const Plan& plan,
                                     std::span<const std::string> election_ids) {
    std::vector<Rational> series;
    series.reserve(election_ids.size());
    for (const auto& e : election_ids) {
        const Rational v = vote_share(graph, e);
        const Rational s = seat_share(district_winners(graph, plan, e));
        series.push_back(disprop(s, v));
    }
    return series;
}

DispropSummary mean_variance(std::span<const Rational> series) {
    if (series.empty()) fail(Errc::empty_series, "mean_variance of an empty series");
    const double n = static_cast<double>(series.size());
    double sum = 0.0;
    for (const auto& x : series) sum += x.to_double();
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& x : series) {
        const double d = x.to_double() - mean;
        ss += d * d;
    }
    return {mean, ss / n};
}

Rational ensemble_mean_share(std::span<const Plan> ensemble, const DualGraph& graph,
                             std::string_view election_id) {
    if (ensemble.empty()) fail(Errc::empty_ensemble, "ensemble_mean_share of an empty ensemble");
    SeatShareMean acc;
    for (const auto& plan : ensemble) {
        acc.add(count_r_seats(district_winners(graph, plan, election_id)), plan.k);
    }
    return acc.mean();
}

void SeatShareMean::add(int r_seats, int k) {
    if (k < 1) fail(Errc::invalid_config, "k must be >= 1");
    if (n_ == 0) k_ = k;
    if (k != k_) fail(Errc::invalid_config, "mixed k within one ensemble");
    seat_sum_ += r_seats;
    ++n_;
}

Rational SeatShareMean::mean() const {
    if (n_ == 0) fail(Errc::empty_ensemble, "mean seat share of an empty ensemble");
    return Rational(seat_sum_, static_cast<std::int64_t>(k_) * n_);
}

}  // namespace recom
