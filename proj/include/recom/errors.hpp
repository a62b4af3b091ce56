#pragma once

#include <stdexcept>
#include <string>

namespace recom {

// Every failure mode exposed by the library has a stable code so callers
// (CLI, bindings) can report machine-readable errors.
enum class Errc {
    parse_error,
    disconnected_graph,
    self_loop,
    duplicate_edge,
    unknown_endpoint,
    inconsistent_elections,
    unknown_unit,
    missing_unit,
    district_out_of_range,
    empty_district,
    discontiguous_district,
    unbalanced_district,
    unknown_election,
    zero_total_vote,
    subset_too_large,
    disconnected_subset,
    seeding_failed,
    step_failed,
    empty_series,
    empty_ensemble,
    missing_ensemble_mean,
    invalid_config,
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const { return code_; }
    const char* code_name() const { return errc_name(code_); }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace recom
