#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recom/graph.hpp"
#include "recom/rational.hpp"

namespace recom {

enum class Party { R, D, Tie };

enum class StandardKind { proportional, efficiency_gap, ensemble_mean };

// A fairness standard mapping the statewide vote share V to an ideal seat
// share: V itself, the (generalized-slope) efficiency-gap target m*V - 1/2,
// or the mean seat share of a comparison ensemble.
struct Standard {
    StandardKind kind = StandardKind::proportional;
    Rational slope = Rational(2);
    std::optional<Rational> ensemble_mean_share;

    static Standard proportional() { return {}; }
    static Standard efficiency_gap(Rational slope = Rational(2));
    static Standard ensemble_mean(Rational share);

    void validate() const;
};

struct DispropSummary {
    double mean = 0.0;
    double variance = 0.0;  // population variance
};

// Statewide R share of the two-party vote, exact.
Rational vote_share(const DualGraph& graph, std::string_view election_id);

// Per-district majority winner; a tie is neither party's majority.
std::vector<Party> district_winners(const DualGraph& graph, const Plan& plan,
                                    std::string_view election_id);

// (#R)/k; ties contribute nothing to the R count.
Rational seat_share(std::span<const Party> winners);

// disprop = S - V, signed from the R viewpoint.
Rational disprop(const Rational& seat_share, const Rational& vote_share);

// Ideal seat share under the standard, clamped to [0,1] for the
// efficiency-gap family.
Rational target_share(const Standard& standard, const Rational& vote_share);

// S minus the standard's target; equals disprop under proportionality.
Rational deviation_from_target(const Rational& seat_share, const Standard& standard,
                               const Rational& vote_share);

// Per-election disprop for one plan, in the given election order.
std::vector<Rational> disprop_series(const DualGraph& graph, const Plan& plan,
                                     std::span<const std::string> election_ids);

DispropSummary mean_variance(std::span<const Rational> series);

// Mean seat share over an ensemble, exact.
Rational ensemble_mean_share(std::span<const Plan> ensemble, const DualGraph& graph,
                             std::string_view election_id);

// Streaming accumulator for ensemble mean seat shares (one pass over an
// ensemble file, any number of elections).
class SeatShareMean {
  public:
    void add(int r_seats, int k);
    Rational mean() const;  // throws empty_ensemble if nothing was added
    std::int64_t count() const { return n_; }

  private:
    std::int64_t seat_sum_ = 0;
    std::int64_t n_ = 0;
    int k_ = 0;
};

int count_r_seats(std::span<const Party> winners);

}  // namespace recom
