#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recom/ftv.hpp"
#include "recom/graph.hpp"
#include "recom/metrics.hpp"
#include "recom/traintest.hpp"

namespace recom {

// Fixed-point decimal with round-half-away-from-zero, so emitted files are
// byte-stable across platforms. decimals in [0, 9].
std::string format_fixed(double value, int decimals);
std::string format_fixed(const Rational& value, int decimals);

// Full evaluation of one plan against an election suite.
struct ScoreRecord {
    std::string plan_name;
    std::vector<std::string> election_ids;
    std::vector<Rational> disprops;
    DispropSummary summary;
    std::optional<FtvResult> ftv;  // present when four FTV elections are configured
};

ScoreRecord score_plan(const DualGraph& graph, const Plan& plan, std::string plan_name,
                       std::vector<std::string> election_ids);

// CSV "variance,mean", one row per plan, 6 decimals; column order matches
// the scatter-plot convention (x = variance).
void emit_mean_variance_csv(std::span<const Plan> ensemble, const DualGraph& graph,
                            std::span<const std::string> election_ids, const std::string& path);

// Streaming variant for large ensemble files.
class MeanVarianceCsvWriter {
  public:
    explicit MeanVarianceCsvWriter(const std::string& path);
    ~MeanVarianceCsvWriter();
    MeanVarianceCsvWriter(const MeanVarianceCsvWriter&) = delete;
    MeanVarianceCsvWriter& operator=(const MeanVarianceCsvWriter&) = delete;

    void write(const DispropSummary& summary);
    void close();

  private:
    struct Impl;
    Impl* impl_;
};

// One plan with a display name.
struct NamedPlan {
    std::string name;
    Plan plan;
};

// Seats-and-targets table in the layout of the enacted-plan comparisons:
// per election the vote share, per standard the ideal seat target, and per
// plan the R seats, R seat share and disprop.
struct TargetTable {
    int k = 1;
    std::vector<std::string> election_ids;
    std::vector<Rational> vote_shares;
    std::vector<std::string> standard_names;
    std::vector<std::vector<Rational>> target_seats;  // [standard][election]
    std::vector<std::string> plan_names;
    std::vector<std::vector<int>> r_seats;            // [plan][election]
    std::vector<std::vector<Rational>> seat_shares;   // [plan][election]
    std::vector<std::vector<Rational>> disprops;      // [plan][election]
};

TargetTable make_target_table(const DualGraph& graph, std::span<const NamedPlan> plans,
                              std::span<const std::string> election_ids,
                              std::span<const Standard> standards,
                              std::span<const std::string> standard_names);

// Rendering: targets at 1 decimal, shares and disprop at 3 (signed).
std::string target_table_json(const TargetTable& table);
std::string target_table_csv(const TargetTable& table);

// JSON array of score shares as percentages at 1 decimal, ordered score
// 4 -> 0 to match the pie-chart sector order.
std::string breakdown_percentages_json(const BreakdownReport& report);
void emit_breakdown(const BreakdownReport& report, const std::string& path);

std::string traintest_json(const TrainTestReport& report);

void write_text_file(const std::string& path, std::string_view text);

}  // namespace recom
