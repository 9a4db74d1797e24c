#ifndef LIFTGEO_REPORT_HPP
#define LIFTGEO_REPORT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace liftgeo {

struct SingularMetric : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveWeight : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroDirection : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownCheck : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Verdict { Pass, Fail, Flagged };

const char* verdict_name(Verdict v);

struct WorstCase {
    std::vector<double> point;   // concatenated coordinates (x, then y if any)
    std::vector<int> indices;    // offending tensor/frame indices
    double residual = 0.0;
};

// Outcome of one named check over a sample set. `verdict` is Pass exactly
// when max_residual <= tolerance; Flagged is reserved for checks whose
// meaning depends on an unresolved interpretation and overrides pass/fail.
struct CheckReport {
    std::string name;
    Verdict verdict = Verdict::Pass;
    double max_residual = 0.0;
    double tolerance = 0.0;
    int sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<WorstCase> worst;
    std::vector<std::string> interpretation_flags;
    std::string params;  // human-readable parameter summary, not serialized

    void note(const std::vector<double>& point, std::vector<int> indices, double residual);
    void finalize(double tol, bool flagged = false);
};

// Serializes the fixed report schema: {check, verdict, max_residual,
// tolerance, seed, samples, worst_cases, interpretation_flags}.
std::string to_json_string(const CheckReport& r);

}  // namespace liftgeo

#endif
