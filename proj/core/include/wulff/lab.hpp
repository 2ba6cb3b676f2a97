#pragma once

#include <string>
#include <vector>

#include "wulff/scenario.hpp"

namespace wulff {

struct CheckResult {
    std::string name;
    bool pass = false;
    double tolerance = 0.0;
    double measured = 0.0;
    std::string detail;
};

/// Full verification record for one scenario. comparison_json is the
/// deterministic section (no timing data); two runs on identical inputs
/// serialize byte-identically.
struct Report {
    std::string scenario_id;
    bool all_passed = false;
    std::vector<CheckResult> checks;
    std::string comparison_json;
    std::string full_json;
};

/// Run the whole pipeline (frames, stationarity, Minkowski, classification,
/// variations, corrected profile) and grade every expected entry.
Report run_verify(const Scenario& scenario);

Report run_verify(const std::string& dir, const std::string& id, const Overrides& ov = {});

/// Reports for every scenario in the directory plus an aggregate JSON
/// document {"reports": [...]} in listing order.
struct VerifyAll {
    std::vector<Report> reports;
    bool all_passed = true;
    std::string comparison_json;
    std::string full_json;
};
VerifyAll run_verify_all(const std::string& dir, const Overrides& ov = {});

/// CSV table of t, A_K, V, lambda, a_K over [-tmax, tmax]; requires a
/// stationary scenario with |V| above the corrected-profile threshold.
std::string run_profile(const Scenario& scenario, double tmax, int steps);

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumericFailure = 2;
inline constexpr int kExitValidationFailure = 3;
inline constexpr int kExitUnknownScenario = 4;

}  // namespace wulff
