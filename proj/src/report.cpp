#include "recom/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace recom {

namespace {

using nlohmann::json;

}  // namespace

std::string format_fixed(double value, int decimals) {
    if (decimals < 0 || decimals > 9) fail(Errc::invalid_config, "decimals must be in 0..9");
    // llround is half-away-from-zero; printf's half-even would make some
    // boundary values platform-noise sensitive.
    double scale = 1.0;
    for (int i = 0; i < decimals; ++i) scale *= 10.0;
    const long long scaled = std::llround(value * scale);
    const bool negative = scaled < 0;
    unsigned long long mag = negative ? -static_cast<unsigned long long>(scaled) : scaled;

    std::string digits = std::to_string(mag);
    if (static_cast<int>(digits.size()) <= decimals) {
        digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    std::string out;
    if (negative) out.push_back('-');
    out.append(digits, 0, digits.size() - static_cast<std::size_t>(decimals));
    if (decimals > 0) {
        out.push_back('.');
        out.append(digits, digits.size() - static_cast<std::size_t>(decimals),
                   static_cast<std::size_t>(decimals));
    }
    return out;
}

std::string format_fixed(const Rational& value, int decimals) {
    return format_fixed(value.to_double(), decimals);
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot open file for writing: " + path);
    out << text;
    if (!out) fail(Errc::io_error, "write failed: " + path);
}

ScoreRecord score_plan(const DualGraph& graph, const Plan& plan, std::string plan_name,
                       std::vector<std::string> election_ids) {
    if (election_ids.empty()) fail(Errc::empty_series, "score_plan needs at least one election");
    ScoreRecord record;
    record.plan_name = std::move(plan_name);
    record.election_ids = std::move(election_ids);
    record.disprops = disprop_series(graph, plan, record.election_ids);
    record.summary = mean_variance(record.disprops);
    if (record.election_ids.size() == 4) {
        FtvConfig config;
        std::copy_n(record.election_ids.begin(), 4, config.election_ids.begin());
        record.ftv = evaluate(graph, plan, config);
    }
    return record;
}

void emit_mean_variance_csv(std::span<const Plan> ensemble, const DualGraph& graph,
                            std::span<const std::string> election_ids, const std::string& path) {
    if (ensemble.empty()) fail(Errc::empty_ensemble, "mean-variance of an empty ensemble");
    if (election_ids.empty()) fail(Errc::empty_series, "mean-variance needs elections");
    MeanVarianceCsvWriter writer(path);
    for (const auto& plan : ensemble) {
        writer.write(mean_variance(disprop_series(graph, plan, election_ids)));
    }
    writer.close();
}

struct MeanVarianceCsvWriter::Impl {
    std::ofstream out;
};

MeanVarianceCsvWriter::MeanVarianceCsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        fail(Errc::io_error, "cannot open CSV for writing: " + path);
    }
    impl_->out << "variance,mean\n";
}

MeanVarianceCsvWriter::~MeanVarianceCsvWriter() { delete impl_; }

void MeanVarianceCsvWriter::write(const DispropSummary& summary) {
    impl_->out << format_fixed(summary.variance, 6) << ',' << format_fixed(summary.mean, 6)
               << '\n';
    if (!impl_->out) fail(Errc::io_error, "CSV write failed");
}

void MeanVarianceCsvWriter::close() {
    impl_->out.close();
    if (impl_->out.fail()) fail(Errc::io_error, "CSV close failed");
}

TargetTable make_target_table(const DualGraph& graph, std::span<const NamedPlan> plans,
                              std::span<const std::string> election_ids,
                              std::span<const Standard> standards,
                              std::span<const std::string> standard_names) {
    if (election_ids.empty()) fail(Errc::empty_series, "target table needs elections");
    if (standards.size() != standard_names.size()) {
        fail(Errc::invalid_config, "each standard needs a name");
    }
    if (plans.empty()) fail(Errc::invalid_config, "target table needs at least one plan");
    TargetTable table;
    table.k = plans.front().plan.k;
    for (const auto& np : plans) {
        if (np.plan.k != table.k) {
            fail(Errc::invalid_config, "all plans in a target table must share k");
        }
    }
    table.election_ids.assign(election_ids.begin(), election_ids.end());
    for (const auto& e : election_ids) table.vote_shares.push_back(vote_share(graph, e));

    for (std::size_t s = 0; s < standards.size(); ++s) {
        table.standard_names.push_back(standard_names[s]);
        std::vector<Rational> seats;
        for (std::size_t e = 0; e < election_ids.size(); ++e) {
            seats.push_back(target_share(standards[s], table.vote_shares[e]));
        }
        table.target_seats.push_back(std::move(seats));
    }

    for (const auto& [name, plan] : plans) {
        table.plan_names.push_back(name);
        std::vector<int> seats;
        std::vector<Rational> shares;
        std::vector<Rational> devs;
        for (std::size_t e = 0; e < election_ids.size(); ++e) {
            auto winners = district_winners(graph, plan, election_ids[e]);
            const int r = count_r_seats(winners);
            seats.push_back(r);
            shares.push_back(Rational(r, plan.k));
            devs.push_back(disprop(shares.back(), table.vote_shares[e]));
        }
        table.r_seats.push_back(std::move(seats));
        table.seat_shares.push_back(std::move(shares));
        table.disprops.push_back(std::move(devs));
    }
    return table;
}

std::string target_table_json(const TargetTable& table) {
    const int k = table.k;
    json doc;
    doc["elections"] = json::array();
    for (std::size_t e = 0; e < table.election_ids.size(); ++e) {
        doc["elections"].push_back({{"id", table.election_ids[e]},
                                    {"v_share", format_fixed(table.vote_shares[e], 6)}});
    }
    doc["targets"] = json::array();
    for (std::size_t s = 0; s < table.standard_names.size(); ++s) {
        json seats = json::array();
        for (const auto& share : table.target_seats[s]) {
            seats.push_back(format_fixed(share * Rational(k), 1));
        }
        doc["targets"].push_back({{"standard", table.standard_names[s]}, {"seats", seats}});
    }
    doc["plans"] = json::array();
    for (std::size_t p = 0; p < table.plan_names.size(); ++p) {
        json seats = json::array();
        json shares = json::array();
        json devs = json::array();
        for (std::size_t e = 0; e < table.election_ids.size(); ++e) {
            seats.push_back(table.r_seats[p][e]);
            shares.push_back(format_fixed(table.seat_shares[p][e], 3));
            devs.push_back(format_fixed(table.disprops[p][e], 3));
        }
        doc["plans"].push_back({{"name", table.plan_names[p]},
                                {"r_seats", seats},
                                {"r_seat_share", shares},
                                {"disprop", devs}});
    }
    return doc.dump();
}

std::string target_table_csv(const TargetTable& table) {
    const int k = table.k;
    std::ostringstream out;
    out << "row";
    for (const auto& e : table.election_ids) out << ',' << e;
    out << '\n';
    out << "v_share";
    for (const auto& v : table.vote_shares) out << ',' << format_fixed(v, 6);
    out << '\n';
    for (std::size_t s = 0; s < table.standard_names.size(); ++s) {
        out << "target:" << table.standard_names[s];
        for (const auto& share : table.target_seats[s]) {
            out << ',' << format_fixed(share * Rational(k), 1);
        }
        out << '\n';
    }
    for (std::size_t p = 0; p < table.plan_names.size(); ++p) {
        out << "seats:" << table.plan_names[p];
        for (std::size_t e = 0; e < table.election_ids.size(); ++e) {
            out << ',' << table.r_seats[p][e];
        }
        out << '\n';
        out << "share:" << table.plan_names[p];
        for (std::size_t e = 0; e < table.election_ids.size(); ++e) {
            out << ',' << format_fixed(table.seat_shares[p][e], 3);
        }
        out << '\n';
        out << "disprop:" << table.plan_names[p];
        for (std::size_t e = 0; e < table.election_ids.size(); ++e) {
            out << ',' << format_fixed(table.disprops[p][e], 3);
        }
        out << '\n';
    }
    return out.str();
}

std::string breakdown_percentages_json(const BreakdownReport& report) {
    // Score 4 first (the "passing cleanly" sector), down to 0.
    std::string out = "[";
    for (int s = 4; s >= 0; --s) {
        out += format_fixed(100.0 * report.shares[static_cast<std::size_t>(s)], 1);
        if (s > 0) out += ",";
    }
    out += "]";
    return out;
}

void emit_breakdown(const BreakdownReport& report, const std::string& path) {
    write_text_file(path, breakdown_percentages_json(report) + "\n");
}

std::string traintest_json(const TrainTestReport& report) {
    json doc;
    doc["training_hist"] = report.training_hist;
    doc["buckets"] = json::array();
    for (const auto& bucket : report.buckets) {
        json b;
        b["s"] = bucket.training_score;
        b["test_hist"] = bucket.test_counts;
        if (bucket.mean_test) {
            b["mean"] = json::parse(format_fixed(*bucket.mean_test, 6));
        } else {
            b["mean"] = nullptr;
        }
        doc["buckets"].push_back(b);
    }
    return doc.dump();
}

}  // namespace recom
