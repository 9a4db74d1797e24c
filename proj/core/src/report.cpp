#include "liftgeo/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace liftgeo {

namespace {
constexpr size_t kWorstKept = 5;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Flagged: return "flagged";
    }
    return "?";
}

void CheckReport::note(const std::vector<double>& point, std::vector<int> indices,
                       double residual) {
    max_residual = std::max(max_residual, residual);
    worst.push_back({point, std::move(indices), residual});
    std::sort(worst.begin(), worst.end(),
              [](const WorstCase& a, const WorstCase& b) { return a.residual > b.residual; });
    if (worst.size() > kWorstKept) worst.resize(kWorstKept);
}

void CheckReport::finalize(double tol, bool flagged) {
    tolerance = tol;
    verdict = flagged ? Verdict::Flagged
                      : (max_residual <= tol ? Verdict::Pass : Verdict::Fail);
}

std::string to_json_string(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["check"] = r.name;
    j["verdict"] = verdict_name(r.verdict);
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["seed"] = r.seed;
    j["samples"] = r.sample_count;
    auto cases = nlohmann::ordered_json::array();
    for (const auto& w : r.worst) {
        nlohmann::ordered_json c;
        c["point"] = w.point;
        c["indices"] = w.indices;
        c["residual"] = w.residual;
        cases.push_back(c);
    }
    j["worst_cases"] = cases;
    j["interpretation_flags"] = r.interpretation_flags;
    return j.dump(2) + "\n";
}

}  // namespace liftgeo
