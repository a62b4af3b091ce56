#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "table_fixture.hpp"
#include "recom/ftv.hpp"

using namespace recom;
using namespace recom::testing;

namespace {

// Six-unit path whose fixed-t(0.05) marks across the five prefix splits form
// a staircase: election Ej is near target exactly for splits i > j, so the
// split-at-i plan scores i-1.
DualGraph staircase_graph() {
    std::vector<std::pair<std::string, std::vector<std::pair<std::int64_t, std::int64_t>>>> t;
    for (int j = 1; j <= 4; ++j) {
        std::vector<std::pair<std::int64_t, std::int64_t>> units{{0, 1}};
        for (int i = 0; i < j - 1; ++i) units.push_back({1, 1});
        while (units.size() < 6) units.push_back({50, 0});
        t.push_back({"E" + std::to_string(j), units});
    }
    return make_graph_with_votes(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, t);
}

std::vector<Plan> staircase_plans(const DualGraph& g) {
    std::vector<Plan> plans;
    for (int cut = 1; cut <= 5; ++cut) {
        std::vector<int> assignment(6, 1);
        for (int i = 0; i < cut; ++i) assignment[static_cast<std::size_t>(i)] = 0;
        plans.push_back(plan_from_assignment(g, assignment, 2));
    }
    return plans;
}

FtvConfig staircase_config() {
    FtvConfig cfg;
    cfg.election_ids = {"E1", "E2", "E3", "E4"};
    cfg.rule = ThresholdRule::fixed;
    cfg.fixed_t = Rational(5, 100);
    return cfg;
}

}  // namespace

TEST_CASE("ftv_threshold: one seat or seven percent, whichever is greater") {
    CHECK(ftv_threshold(13) == Rational(1, 13));
    CHECK(ftv_threshold(13).to_double() == doctest::Approx(0.0769).epsilon(1e-2));
    CHECK(ftv_threshold(15) == Rational(7, 100));
    CHECK(ftv_threshold(14) == Rational(1, 14));  // 1/14 ≈ .0714 still above .07
    CHECK(ftv_threshold(1) == Rational(1));
    CHECK_THROWS_AS((void)ftv_threshold(0), Error);
}

TEST_CASE("NC 2012 plan fails all four designated elections") {
    // (V, seats) pairs for Pres12, Sen14, Pres16, Sen16 from the fixture
    // table; the enacted plan carried 10 of 13 districts in each.
    std::vector<SeatsColumn> cols{
        {"Pres12", decimal("0.5108"), 10},
        {"Sen14", decimal("0.5080"), 10},
        {"Pres16", decimal("0.5198"), 10},
        {"Sen16", decimal("0.5300"), 10},
    };
    auto g = make_seats_graph(13, cols);
    auto plan = identity_plan(g);

    FtvConfig cfg;
    cfg.election_ids = {"Pres12", "Sen14", "Pres16", "Sen16"};
    auto result = evaluate(g, plan, cfg);
    CHECK(result.marks == std::array<Mark, 4>{Mark::plus, Mark::plus, Mark::plus, Mark::plus});
    CHECK(result.score == 0);
    CHECK_FALSE(result.pass);
}

TEST_CASE("a plan matching the target everywhere earns four checks") {
    // V = s/k exactly in each election.
    std::vector<SeatsColumn> cols{
        {"A", Rational(2, 4), 2},
        {"B", Rational(1, 4), 1},
        {"C", Rational(3, 4), 3},
        {"D", Rational(2, 4), 2},
    };
    auto g = make_seats_graph(4, cols);
    FtvConfig cfg;
    cfg.election_ids = {"A", "B", "C", "D"};
    auto result = evaluate(g, identity_plan(g), cfg);
    CHECK(result.marks ==
          std::array<Mark, 4>{Mark::check, Mark::check, Mark::check, Mark::check});
    CHECK(result.score == 4);
    CHECK(result.pass);
}

TEST_CASE("three checks pass, two failures fail, boundary counts as failure") {
    // k=4 so t = max(0.07, 1/4) = 1/4. V=1/4 with S=2/4 puts |dev| exactly
    // at t: a failure on the favored side.
    std::vector<SeatsColumn> cols{
        {"A", Rational(1, 4), 2},  // dev = +1/4 = t -> plus
        {"B", Rational(2, 4), 2},  // dev = 0 -> check
        {"C", Rational(2, 4), 2},
        {"D", Rational(2, 4), 2},
    };
    auto g = make_seats_graph(4, cols);
    FtvConfig cfg;
    cfg.election_ids = {"A", "B", "C", "D"};
    auto result = evaluate(g, identity_plan(g), cfg);
    CHECK(result.marks ==
          std::array<Mark, 4>{Mark::plus, Mark::check, Mark::check, Mark::check});
    CHECK(result.score == 3);
    CHECK(result.pass);

    // Minus marks point the other way.
    std::vector<SeatsColumn> cols2{
        {"A", Rational(3, 4), 1},  // dev = -1/2 -> minus
        {"B", Rational(2, 4), 2},
        {"C", Rational(3, 4), 1},
        {"D", Rational(3, 4), 1},
    };
    auto g2 = make_seats_graph(4, cols2);
    auto r2 = evaluate(g2, identity_plan(g2), cfg);
    CHECK(r2.marks ==
          std::array<Mark, 4>{Mark::minus, Mark::check, Mark::minus, Mark::minus});
    CHECK(r2.score == 1);
    CHECK_FALSE(r2.pass);
}

TEST_CASE("ensemble-mean standard requires per-election means") {
    auto g = make_seats_graph(4, {{"A", Rational(1, 2), 2},
                                  {"B", Rational(1, 2), 2},
                                  {"C", Rational(1, 2), 2},
                                  {"D", Rational(1, 2), 2}});
    FtvConfig cfg;
    cfg.election_ids = {"A", "B", "C", "D"};
    cfg.standard.kind = StandardKind::ensemble_mean;

    CHECK_THROWS_AS((void)evaluate(g, identity_plan(g), cfg), Error);

    EnsembleMeans means{{"A", Rational(1, 2)},
                        {"B", Rational(1, 2)},
                        {"C", Rational(1, 4)},
                        {"D", Rational(3, 4)}};
    auto result = evaluate(g, identity_plan(g), cfg, means);
    // t = 1/4; S = 1/2 per election; deviations 0, 0, +1/4, -1/4.
    CHECK(result.marks ==
          std::array<Mark, 4>{Mark::check, Mark::check, Mark::plus, Mark::minus});

    EnsembleMeans incomplete{{"A", Rational(1, 2)}};
    CHECK_THROWS_AS((void)evaluate(g, identity_plan(g), cfg, incomplete), Error);
}

TEST_CASE("breakdown over the staircase ensemble: one plan per score") {
    auto g = staircase_graph();
    auto plans = staircase_plans(g);
    auto cfg = staircase_config();

    // Confirm the designed scores one by one.
    FtvScorer scorer(g, cfg);
    for (int i = 0; i < 5; ++i) {
        CHECK(scorer.score(plans[static_cast<std::size_t>(i)]).score == i);
    }

    auto report = breakdown(plans, g, cfg);
    CHECK(report.total == 5);
    for (int s = 0; s < 5; ++s) {
        CHECK(report.counts[static_cast<std::size_t>(s)] == 1);
        CHECK(report.shares[static_cast<std::size_t>(s)] == doctest::Approx(0.2));
    }

    // One all-checks plan.
    std::vector<Plan> only{plans[4]};
    auto single = breakdown(only, g, cfg);
    CHECK(single.counts == std::array<std::int64_t, 5>{0, 0, 0, 0, 1});
    CHECK(single.shares[4] == doctest::Approx(1.0));

    CHECK_THROWS_AS((void)breakdown(std::vector<Plan>{}, g, cfg), Error);
}

TEST_CASE("percentile report ranks by score with deterministic ties") {
    // Scores (4,4,3,3,3,2,2,1,0,0) via repetition of staircase plans.
    auto g = staircase_graph();
    auto plans = staircase_plans(g);
    auto cfg = staircase_config();
    std::vector<Plan> ensemble{plans[4], plans[4], plans[3], plans[3], plans[3],
                               plans[2], plans[2], plans[1], plans[0], plans[0]};

    auto report = percentile_report(ensemble, g, cfg, Rational(1, 4));
    CHECK(report.plan_ordinal == 2);  // ceil(2.5)-1 = 2 in descending order
    CHECK(report.result.score == 3);
    CHECK(report.result.pass);

    // 20% of plans score >= 3, so the 10th percentile plan passes.
    auto p10 = percentile_report(ensemble, g, cfg, Rational(1, 10));
    CHECK(p10.result.score == 4);
    CHECK(p10.result.pass);

    // All plans identical: any percentile reports that plan.
    std::vector<Plan> same{plans[2], plans[2], plans[2]};
    for (auto p : {Rational(1, 10), Rational(1, 4), Rational(9, 10)}) {
        auto r = percentile_report(same, g, cfg, p);
        CHECK(r.result.score == 2);
        CHECK(r.modal_marks == r.result.marks);
    }

    CHECK_THROWS_AS((void)percentile_report(ensemble, g, cfg, Rational(0)), Error);
    CHECK_THROWS_AS((void)percentile_report(ensemble, g, cfg, Rational(1)), Error);
}

TEST_CASE("modal marks break frequency ties toward check < plus < minus") {
    FtvResult a;
    a.marks = {Mark::plus, Mark::check, Mark::check, Mark::check};
    a.score = 3;
    a.pass = true;
    FtvResult b;
    b.marks = {Mark::check, Mark::check, Mark::check, Mark::minus};
    b.score = 3;
    b.pass = true;

    // One of each: the lexicographically smaller vector wins the mode.
    std::vector<FtvResult> results{a, b};
    auto report = percentile_from_results(results, Rational(1, 2));
    CHECK(report.modal_marks ==
          std::array<Mark, 4>{Mark::check, Mark::check, Mark::check, Mark::minus});

    // Frequency dominates when unequal.
    std::vector<FtvResult> more{a, a, b};
    CHECK(percentile_from_results(more, Rational(1, 2)).modal_marks == a.marks);
}

TEST_CASE("marks depend only on seat counts, not district labels") {
    auto g = staircase_graph();
    auto plans = staircase_plans(g);
    auto cfg = staircase_config();
    FtvScorer scorer(g, cfg);
    for (const auto& plan : plans) {
        Plan relabeled = plan;
        for (auto& d : relabeled.assignment) d = 1 - d;
        CHECK(scorer.score(plan).marks == scorer.score(relabeled).marks);
    }
}

TEST_CASE("mark symbols") {
    CHECK(std::string(mark_symbol(Mark::check)) == "✓");
    CHECK(std::string(mark_symbol(Mark::plus)) == "+");
    CHECK(std::string(mark_symbol(Mark::minus)) == "-");
}
