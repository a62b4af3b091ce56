// Command-line front end: ensemble generation and plan scoring over the
// JSON/CSV formats documented in the README.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "recom/chain.hpp"
#include "recom/ftv.hpp"
#include "recom/graph.hpp"
#include "recom/metrics.hpp"
#include "recom/report.hpp"
#include "recom/traintest.hpp"

namespace {

using nlohmann::json;
using namespace recom;

std::vector<std::string> split_ids(const std::string& text) {
    std::vector<std::string> ids;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!current.empty()) ids.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) ids.push_back(current);
    return ids;
}

json rounded(double value, int decimals) {
    return json::parse(format_fixed(value, decimals));
}

Standard make_standard(const std::string& name, double slope) {
    if (name == "proportional") return Standard::proportional();
    if (name == "eg" || name == "efficiency-gap") {
        return Standard::efficiency_gap(Rational::from_decimal(slope));
    }
    if (name == "ensemble-mean") {
        Standard s;
        s.kind = StandardKind::ensemble_mean;
        return s;
    }
    fail(Errc::invalid_config, "unknown standard: " + name);
}

// First pass over an ensemble file: per-election mean seat shares.
EnsembleMeans compute_means(const std::string& ensemble_path, const DualGraph& graph,
                            const std::vector<std::string>& elections, int forced_k) {
    std::map<std::string, SeatShareMean> accs;
    for_each_record(ensemble_path, [&](const EnsembleRecord& rec) {
        int k = forced_k;
        if (k == 0) {
            for (int d : rec.assignment) k = std::max(k, d + 1);
        }
        Plan plan = plan_from_assignment(graph, rec.assignment, k);
        for (const auto& e : elections) {
            accs[e].add(count_r_seats(district_winners(graph, plan, e)), k);
        }
    });
    EnsembleMeans means;
    for (auto& [e, acc] : accs) means[e] = acc.mean();
    if (means.empty()) fail(Errc::empty_ensemble, "ensemble file has no records");
    return means;
}

json marks_json(const std::array<Mark, 4>& marks) {
    json arr = json::array();
    for (auto m : marks) arr.push_back(mark_symbol(m));
    return arr;
}

struct FtvCliArgs {
    std::string graph_path;
    std::string plan_path;
    std::string elections;
    std::string standard = "proportional";
    double slope = 2.0;
    std::string ensemble_path;
    double fixed_t = 0.0;
    double percentile = 0.0;
    int k = 0;
};

int run_ftv(const FtvCliArgs& args) {
    auto graph = DualGraph::load(args.graph_path);
    auto ids = split_ids(args.elections);
    if (ids.size() != 4) fail(Errc::invalid_config, "ftv needs exactly four election ids");

    FtvConfig config;
    std::copy_n(ids.begin(), 4, config.election_ids.begin());
    config.standard = make_standard(args.standard, args.slope);
    if (args.fixed_t > 0) {
        config.rule = ThresholdRule::fixed;
        config.fixed_t = Rational::from_decimal(args.fixed_t);
    }

    std::optional<EnsembleMeans> means;
    if (config.standard.kind == StandardKind::ensemble_mean) {
        if (args.ensemble_path.empty()) {
            fail(Errc::missing_ensemble_mean,
                 "the ensemble-mean standard needs --ensemble to derive targets");
        }
        means = compute_means(args.ensemble_path, graph, ids, args.k);
    }

    if (!args.plan_path.empty()) {
        auto plan = load_plan(args.plan_path, graph, args.k);
        const int k = plan.k;
        FtvScorer scorer(graph, config, means);
        auto result = scorer.score(plan);
        json out{{"t", rounded(scorer.threshold_for(k).to_double(), 6)},
                 {"marks", marks_json(result.marks)},
                 {"score", result.score},
                 {"verdict", result.pass ? "PASS" : "FAIL"}};
        std::cout << out.dump() << "\n";
        return 0;
    }

    if (args.ensemble_path.empty() || args.percentile <= 0.0) {
        fail(Errc::invalid_config, "ftv needs either --plan, or --ensemble with --percentile");
    }

    FtvScorer scorer(graph, config, means);
    std::vector<FtvResult> results;
    std::vector<std::int64_t> steps;
    int k_seen = args.k;
    for_each_record(args.ensemble_path, [&](const EnsembleRecord& rec) {
        int k = args.k;
        if (k == 0) {
            for (int d : rec.assignment) k = std::max(k, d + 1);
        }
        k_seen = k;
        Plan plan = plan_from_assignment(graph, rec.assignment, k);
        results.push_back(scorer.score(plan));
        steps.push_back(rec.step_index);
    });
    if (results.empty()) fail(Errc::empty_ensemble, "ensemble file has no records");

    auto report = percentile_from_results(results, Rational::from_decimal(args.percentile));
    json out{{"t", rounded(scorer.threshold_for(k_seen).to_double(), 6)},
             {"percentile", args.percentile},
             {"plan_step", steps[static_cast<std::size_t>(report.plan_ordinal)]},
             {"marks", marks_json(report.result.marks)},
             {"score", report.result.score},
             {"verdict", report.result.pass ? "PASS" : "FAIL"},
             {"modal_marks", marks_json(report.modal_marks)}};
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spanning-tree recombination ensembles and seats-votes analysis"};
    app.require_subcommand(1);

    // --- run-chain ---------------------------------------------------------
    auto* run = app.add_subcommand("run-chain", "Generate an ensemble by recombination");
    std::string run_graph, run_config, run_out, run_format = "auto";
    std::optional<std::uint64_t> run_seed;
    run->add_option("--graph", run_graph, "Dual graph JSON")->required();
    run->add_option("--config", run_config, "Chain config JSON")->required();
    run->add_option("--out", run_out, "Ensemble output file")->required();
    run->add_option("--seed", run_seed, "Override the config seed");
    run->add_option("--format", run_format, "Record format: auto|b36|jsonl")
        ->check(CLI::IsMember({"auto", "b36", "jsonl"}));

    // --- score -------------------------------------------------------------
    auto* score = app.add_subcommand("score", "Evaluate one plan across an election suite");
    std::string score_graph, score_plan_path, score_elections, score_out;
    int score_k = 0;
    score->add_option("--graph", score_graph)->required();
    score->add_option("--plan", score_plan_path, "Plan CSV")->required();
    score->add_option("--elections", score_elections, "Comma-separated election ids")->required();
    score->add_option("--k", score_k, "Districts (default: inferred from the plan)");
    score->add_option("--out", score_out, "Also write the JSON record here");

    // --- ftv ---------------------------------------------------------------
    auto* ftv = app.add_subcommand("ftv", "Four-election near-target test");
    FtvCliArgs ftv_args;
    ftv->add_option("--graph", ftv_args.graph_path)->required();
    ftv->add_option("--plan", ftv_args.plan_path, "Plan CSV (single-plan mode)");
    ftv->add_option("--elections", ftv_args.elections, "Exactly four election ids")->required();
    ftv->add_option("--standard", ftv_args.standard, "proportional|eg|ensemble-mean");
    ftv->add_option("--slope", ftv_args.slope, "Efficiency-gap slope (default 2)");
    ftv->add_option("--ensemble", ftv_args.ensemble_path,
                    "Ensemble file (targets for ensemble-mean; plans for --percentile)");
    ftv->add_option("--t", ftv_args.fixed_t, "Fixed threshold instead of max(0.07, 1/k)");
    ftv->add_option("--percentile", ftv_args.percentile,
                    "Report the p-th percentile plan of --ensemble");
    ftv->add_option("--k", ftv_args.k, "Districts (default: inferred)");

    // --- breakdown ---------------------------------------------------------
    auto* brk = app.add_subcommand("breakdown", "Score an ensemble 0..4 against the test");
    std::string brk_graph, brk_ensemble, brk_elections, brk_standard = "proportional", brk_out;
    double brk_slope = 2.0, brk_t = 0.0;
    int brk_k = 0;
    brk->add_option("--graph", brk_graph)->required();
    brk->add_option("--ensemble", brk_ensemble)->required();
    brk->add_option("--elections", brk_elections, "Exactly four election ids")->required();
    brk->add_option("--standard", brk_standard, "proportional|eg|ensemble-mean");
    brk->add_option("--slope", brk_slope);
    brk->add_option("--t", brk_t, "Fixed threshold instead of max(0.07, 1/k)");
    brk->add_option("--k", brk_k);
    brk->add_option("--out", brk_out, "Write pie-chart percentages (score 4..0) here");

    // --- traintest ---------------------------------------------------------
    auto* tt = app.add_subcommand("traintest", "Early/later predictive score histograms");
    std::string tt_graph, tt_ensemble, tt_early, tt_later, tt_rule = "fixed";
    double tt_t = 0.07;
    int tt_k = 0;
    tt->add_option("--graph", tt_graph)->required();
    tt->add_option("--ensemble", tt_ensemble)->required();
    tt->add_option("--early", tt_early, "Comma-separated early election ids")->required();
    tt->add_option("--later", tt_later, "Comma-separated later election ids")->required();
    tt->add_option("--t", tt_t, "Near-proportionality threshold (default 0.07)");
    tt->add_option("--rule", tt_rule, "fixed|ftv (ftv uses max(0.07, 1/k))")
        ->check(CLI::IsMember({"fixed", "ftv"}));
    tt->add_option("--k", tt_k);

    // --- mean-variance -----------------------------------------------------
    auto* mv = app.add_subcommand("mean-variance", "Per-plan disprop mean/variance CSV");
    std::string mv_graph, mv_ensemble, mv_elections, mv_out;
    int mv_k = 0;
    mv->add_option("--graph", mv_graph)->required();
    mv->add_option("--ensemble", mv_ensemble)->required();
    mv->add_option("--elections", mv_elections)->required();
    mv->add_option("--out", mv_out, "CSV output path")->required();
    mv->add_option("--k", mv_k);

    // --- targets -----------------------------------------------------------
    auto* tg = app.add_subcommand("targets", "Seats-and-targets table for named plans");
    std::string tg_graph, tg_plans, tg_elections, tg_standards = "proportional,eg";
    std::string tg_ensemble, tg_format = "json", tg_out;
    double tg_slope = 2.0;
    int tg_k = 0;
    tg->add_option("--graph", tg_graph)->required();
    tg->add_option("--plans", tg_plans, "name=plan.csv[,name=plan.csv...]")->required();
    tg->add_option("--elections", tg_elections)->required();
    tg->add_option("--standards", tg_standards, "Subset of proportional,eg,ensemble-mean");
    tg->add_option("--slope", tg_slope);
    tg->add_option("--ensemble", tg_ensemble, "Ensemble for the ensemble-mean standard");
    tg->add_option("--format", tg_format)->check(CLI::IsMember({"json", "csv"}));
    tg->add_option("--out", tg_out, "Also write the table here");
    tg->add_option("--k", tg_k);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << json{{"error", "usage_error"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (*run) {
            auto graph = DualGraph::load(run_graph);
            auto config = ChainConfig::load(run_config);
            if (run_seed) config.seed = *run_seed;

            EnsembleFormat format = config.k <= 36 ? EnsembleFormat::base36 : EnsembleFormat::jsonl;
            if (run_format == "b36") format = EnsembleFormat::base36;
            if (run_format == "jsonl") format = EnsembleFormat::jsonl;

            Rng rng(config.seed);
            auto start = seed_plan(graph, config, rng);
            EnsembleWriter writer(run_out, config.k, format);
            auto summary = run_chain(
                graph, start, config, [&](const EnsembleRecord& r) { writer.write(r); }, rng);
            writer.close();
            json out{{"steps", summary.steps_completed},
                     {"records", summary.records_emitted},
                     {"tree_draws", summary.tree_draws},
                     {"retries", summary.retries},
                     {"wall_seconds", rounded(summary.wall_seconds, 3)},
                     {"out", run_out}};
            std::cout << out.dump() << "\n";
        } else if (*score) {
            auto graph = DualGraph::load(score_graph);
            auto plan = load_plan(score_plan_path, graph, score_k);
            auto name = std::filesystem::path(score_plan_path).stem().string();
            auto record = score_plan(graph, plan, name, split_ids(score_elections));
            json disprops = json::array();
            for (const auto& d : record.disprops) disprops.push_back(rounded(d.to_double(), 3));
            json out{{"plan", record.plan_name},
                     {"elections", record.election_ids},
                     {"disprop", disprops},
                     {"mean", rounded(record.summary.mean, 6)},
                     {"variance", rounded(record.summary.variance, 6)}};
            if (record.ftv) {
                out["ftv"] = json{{"marks", marks_json(record.ftv->marks)},
                                  {"score", record.ftv->score},
                                  {"verdict", record.ftv->pass ? "PASS" : "FAIL"}};
            } else {
                out["ftv"] = nullptr;
            }
            const auto text = out.dump();
            if (!score_out.empty()) write_text_file(score_out, text + "\n");
            std::cout << text << "\n";
        } else if (*ftv) {
            return run_ftv(ftv_args);
        } else if (*brk) {
            auto graph = DualGraph::load(brk_graph);
            auto ids = split_ids(brk_elections);
            if (ids.size() != 4) fail(Errc::invalid_config, "breakdown needs four election ids");
            FtvConfig config;
            std::copy_n(ids.begin(), 4, config.election_ids.begin());
            config.standard = make_standard(brk_standard, brk_slope);
            if (brk_t > 0) {
                config.rule = ThresholdRule::fixed;
                config.fixed_t = Rational::from_decimal(brk_t);
            }
            std::optional<EnsembleMeans> means;
            if (config.standard.kind == StandardKind::ensemble_mean) {
                means = compute_means(brk_ensemble, graph, ids, brk_k);
            }
            FtvScorer scorer(graph, config, means);
            BreakdownAccumulator acc;
            for_each_record(brk_ensemble, [&](const EnsembleRecord& rec) {
                int k = brk_k;
                if (k == 0) {
                    for (int d : rec.assignment) k = std::max(k, d + 1);
                }
                acc.add(scorer.score(plan_from_assignment(graph, rec.assignment, k)));
            });
            auto report = acc.finish();
            json counts = json::array(), shares = json::array();
            for (int s = 0; s <= 4; ++s) {
                counts.push_back(report.counts[static_cast<std::size_t>(s)]);
                shares.push_back(rounded(report.shares[static_cast<std::size_t>(s)], 6));
            }
            if (!brk_out.empty()) emit_breakdown(report, brk_out);
            std::cout << json{{"total", report.total}, {"counts", counts}, {"shares", shares}}.dump()
                      << "\n";
        } else if (*tt) {
            auto graph = DualGraph::load(tt_graph);
            SplitConfig split;
            split.early_ids = split_ids(tt_early);
            split.later_ids = split_ids(tt_later);
            split.t = Rational::from_decimal(tt_t);
            split.validate();

            TrainTestAccumulator acc(split.early_ids.size(), split.later_ids.size());
            for_each_record(tt_ensemble, [&](const EnsembleRecord& rec) {
                int k = tt_k;
                if (k == 0) {
                    for (int d : rec.assignment) k = std::max(k, d + 1);
                }
                Plan plan = plan_from_assignment(graph, rec.assignment, k);
                const Rational t = tt_rule == "ftv" ? ftv_threshold(k) : split.t;
                acc.add(proportionality_score(graph, plan, split.early_ids, t),
                        proportionality_score(graph, plan, split.later_ids, t));
            });
            std::cout << traintest_json(acc.finish()) << "\n";
        } else if (*mv) {
            auto graph = DualGraph::load(mv_graph);
            auto ids = split_ids(mv_elections);
            if (ids.empty()) fail(Errc::empty_series, "mean-variance needs elections");
            MeanVarianceCsvWriter writer(mv_out);
            std::int64_t rows = 0;
            for_each_record(mv_ensemble, [&](const EnsembleRecord& rec) {
                int k = mv_k;
                if (k == 0) {
                    for (int d : rec.assignment) k = std::max(k, d + 1);
                }
                Plan plan = plan_from_assignment(graph, rec.assignment, k);
                writer.write(mean_variance(disprop_series(graph, plan, ids)));
                ++rows;
            });
            if (rows == 0) fail(Errc::empty_ensemble, "ensemble file has no records");
            writer.close();
            std::cout << json{{"rows", rows}, {"out", mv_out}}.dump() << "\n";
        } else if (*tg) {
            auto graph = DualGraph::load(tg_graph);
            auto ids = split_ids(tg_elections);

            std::vector<NamedPlan> plans;
            int k = tg_k;
            for (const auto& spec : split_ids(tg_plans)) {
                auto eq = spec.find('=');
                if (eq == std::string::npos) {
                    fail(Errc::invalid_config, "plan spec must be name=path: " + spec);
                }
                const std::string name = spec.substr(0, eq);
                const std::string path = spec.substr(eq + 1);
                plans.push_back({name, load_plan(path, graph, k)});
                k = plans.back().plan.k;
            }

            std::vector<Standard> standards;
            std::vector<std::string> names;
            for (const auto& sname : split_ids(tg_standards)) {
                if (sname == "ensemble-mean") {
                    // The ensemble-mean target varies per election; resolve
                    // the stored share per election below.
                    if (tg_ensemble.empty()) {
                        fail(Errc::missing_ensemble_mean,
                             "the ensemble-mean standard needs --ensemble");
                    }
                    continue;
                }
                standards.push_back(make_standard(sname, tg_slope));
                names.push_back(sname);
            }
            auto table = make_target_table(graph, plans, ids, standards, names);

            if (split_ids(tg_standards).size() != standards.size()) {
                EnsembleMeans means = compute_means(tg_ensemble, graph, ids, k);
                table.standard_names.push_back("ensemble-mean");
                std::vector<Rational> seats;
                for (const auto& e : ids) seats.push_back(means.at(e));
                table.target_seats.push_back(std::move(seats));
            }

            const std::string text =
                tg_format == "csv" ? target_table_csv(table) : target_table_json(table) + "\n";
            if (!tg_out.empty()) write_text_file(tg_out, text);
            std::cout << text;
            if (tg_format == "json") std::cout.flush();
        }
    } catch (const Error& e) {
        std::cerr << json{{"error", e.code_name()}, {"message", e.what()}}.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal_error"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
