#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wulff/body.hpp"
#include "wulff/cone.hpp"
#include "wulff/patch.hpp"

namespace wulff {

class UnknownScenarioError : public std::runtime_error {
  public:
    explicit UnknownScenarioError(const std::string& id)
        : std::runtime_error("unknown scenario: " + id) {}
};

struct GridSpec {
    int interior = 48;
    int boundary = 96;
};

/// One entry of a scenario's expected-outcome list; `check` selects the
/// verification, the remaining fields parameterize it.
struct Expected {
    std::string check;
    double tol = 0.0;
    bool expect = true;
    std::string verdict;
    Vec3 point;
    bool has_point = false;
    double lambda = 0.0;
    bool has_lambda = false;
    double lo = 0.0, hi = 0.0;
    double threshold = 0.0;
};

struct Scenario {
    std::string id;
    std::string description;
    int dim = 3;
    std::shared_ptr<const ConvexBody> body;
    std::shared_ptr<const Patch> patch;
    std::shared_ptr<const SolidCone> cone;  // null when unconstrained
    GridSpec grid;
    double fd_step = 1e-3;
    std::vector<Expected> expected;
};

/// Runtime overrides accepted on the command line (--set key=value) and the
/// WULFF_LAB_GRID environment variable. Only grid sizes, the FD step and
/// perturbation amplitudes may be overridden; structural edits need a new
/// scenario file.
struct Overrides {
    std::optional<int> grid;
    std::optional<int> boundary_grid;
    std::optional<double> fd_step;
    std::optional<double> amplitude;

    static Overrides parse(const std::vector<std::string>& assignments);
};

/// Parse a scenario document (throws ValidationError on malformed input).
Scenario scenario_from_json(const std::string& json_text, const Overrides& ov = {});

/// Load scenarios/<id>.json from a directory.
Scenario load_scenario(const std::string& dir, const std::string& id, const Overrides& ov = {});

struct ScenarioInfo {
    std::string id;
    std::string description;
};

/// All scenario ids in a directory, sorted; stable across runs.
std::vector<ScenarioInfo> list_scenarios(const std::string& dir);

}  // namespace wulff
