#include "recom/errors.hpp"

namespace recom {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::parse_error: return "parse_error";
        case Errc::disconnected_graph: return "disconnected_graph";
        case Errc::self_loop: return "self_loop";
        case Errc::duplicate_edge: return "duplicate_edge";
        case Errc::unknown_endpoint: return "unknown_endpoint";
        case Errc::inconsistent_elections: return "inconsistent_elections";
        case Errc::unknown_unit: return "unknown_unit";
        case Errc::missing_unit: return "missing_unit";
        case Errc::district_out_of_range: return "district_out_of_range";
        case Errc::empty_district: return "empty_district";
        case Errc::discontiguous_district: return "discontiguous_district";
        case Errc::unbalanced_district: return "unbalanced_district";
        case Errc::unknown_election: return "unknown_election";
        case Errc::zero_total_vote: return "zero_total_vote";
        case Errc::subset_too_large: return "subset_too_large";
        case Errc::disconnected_subset: return "disconnected_subset";
        case Errc::seeding_failed: return "seeding_failed";
        case Errc::step_failed: return "step_failed";
        case Errc::empty_series: return "empty_series";
        case Errc::empty_ensemble: return "empty_ensemble";
        case Errc::missing_ensemble_mean: return "missing_ensemble_mean";
        case Errc::invalid_config: return "invalid_config";
        case Errc::io_error: return "io_error";
    }
    return "unknown_error";
}

}  // namespace recom
