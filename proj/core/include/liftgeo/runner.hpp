#ifndef LIFTGEO_RUNNER_HPP
#define LIFTGEO_RUNNER_HPP

// Check orchestration: builds the requested lift metric / lift connection
// pair from a manifold definition, runs one named check deterministically,
// and maps verdicts to exit codes (0 pass, 1 fail, 2 flagged, 3 error).

#include "liftgeo/manifold.hpp"
#include "liftgeo/report.hpp"
#include "liftgeo/structure.hpp"

namespace liftgeo {

struct RunConfig {
    std::uint64_t seed = 12345;
    int samples = 20;
    double fiber_range = 2.0;
    double tol = -1.0;  // negative: use the per-check default
    int curvature_sign = 1;
    int directions = 8;
    int k = 2;
    std::string tm_metric = "sasaki";   // sasaki | twisted[:f,h] | gradient[:f]
    bool tm_metric_explicit = false;
    std::string tm_connection = "complete";
    // horizontal | complete | lc-sasaki | lc-twisted[:f,h] | lc-gradient[:f] | numeric
    std::string field_name = "rotation";
    std::string lift = "horizontal";  // vertical | horizontal
};

const std::vector<std::string>& check_names();
double default_tolerance(const std::string& check);

CheckReport run_check(const ManifoldDefinition& def, const std::string& check,
                      const RunConfig& cfg);

int exit_code(const CheckReport& report);

// LIFTGEO_SEED environment override, else 12345.
std::uint64_t default_seed();

// Helpers shared with the test suites.
TMMetric build_tm_metric(const ManifoldDefinition& def, const std::string& spec,
                         const ConnectionField& frame_conn);
TMConnection build_tm_connection(const ManifoldDefinition& def, const std::string& spec,
                                 const TMMetric& metric, const ConnectionField& frame_conn);

}  // namespace liftgeo

#endif
