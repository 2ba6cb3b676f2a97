// wulff-lab: verification CLI for anisotropic surface-energy scenarios.
//
//   wulff-lab list
//   wulff-lab verify --scenario <id> [--set k=v] --report out.json
//   wulff-lab verify --all --report out.json
//   wulff-lab profile --scenario <id> --tmax 0.05 --steps 21 --out profile.csv

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "wulff/lab.hpp"

namespace {

int write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content << std::endl;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return wulff::kExitValidationFailure;
    }
    out << content;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical workbench for anisotropic surface energies in solid cones"};
    app.require_subcommand(1);

    std::string scenario_dir = "scenarios";
    app.add_option("--scenarios", scenario_dir, "Scenario catalog directory")
        ->capture_default_str();

    auto* list_cmd = app.add_subcommand("list", "List catalog scenarios");

    std::string verify_id;
    bool verify_all = false;
    std::string report_path;
    std::vector<std::string> sets;
    auto* verify_cmd = app.add_subcommand("verify", "Run the verification pipeline");
    verify_cmd->add_option("--scenario", verify_id, "Scenario id");
    verify_cmd->add_flag("--all", verify_all, "Verify every scenario");
    verify_cmd->add_option("--report", report_path, "Write the JSON report here");
    verify_cmd->add_option("--set", sets, "Override key=value (grid, boundary_grid, fd_step, amplitude)");

    std::string profile_id, profile_out;
    double tmax = 0.05;
    int steps = 21;
    auto* profile_cmd = app.add_subcommand("profile", "Tabulate the corrected deformation profile");
    profile_cmd->add_option("--scenario", profile_id, "Scenario id")->required();
    profile_cmd->add_option("--tmax", tmax, "Half-width of the parameter range")
        ->capture_default_str();
    profile_cmd->add_option("--steps", steps, "Number of rows (odd, >= 5)")->capture_default_str();
    profile_cmd->add_option("--out", profile_out, "Write the CSV here");
    profile_cmd->add_option("--set", sets, "Override key=value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& info : wulff::list_scenarios(scenario_dir))
                std::cout << info.id << "  " << info.description << "\n";
            return wulff::kExitOk;
        }
        const wulff::Overrides ov = wulff::Overrides::parse(sets);
        if (verify_cmd->parsed()) {
            if (verify_all == !verify_id.empty()) {
                std::cerr << "verify: pass exactly one of --scenario <id> or --all\n";
                return wulff::kExitValidationFailure;
            }
            if (verify_all) {
                const wulff::VerifyAll all = wulff::run_verify_all(scenario_dir, ov);
                const int rc = write_or_print(report_path, all.full_json);
                if (rc != 0) return rc;
                for (const auto& rep : all.reports)
                    std::cerr << (rep.all_passed ? "PASS " : "FAIL ") << rep.scenario_id << "\n";
                return all.all_passed ? wulff::kExitOk : wulff::kExitNumericFailure;
            }
            const wulff::Report rep = wulff::run_verify(scenario_dir, verify_id, ov);
            const int rc = write_or_print(report_path, rep.full_json);
            if (rc != 0) return rc;
            std::cerr << (rep.all_passed ? "PASS " : "FAIL ") << rep.scenario_id << "\n";
            return rep.all_passed ? wulff::kExitOk : wulff::kExitNumericFailure;
        }
        if (profile_cmd->parsed()) {
            const wulff::Scenario sc = wulff::load_scenario(scenario_dir, profile_id, ov);
            const std::string csv = wulff::run_profile(sc, tmax, steps);
            return write_or_print(profile_out, csv);
        }
    } catch (const wulff::UnknownScenarioError& e) {
        std::cerr << e.what() << "\n";
        return wulff::kExitUnknownScenario;
    } catch (const wulff::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return wulff::kExitValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return wulff::kExitValidationFailure;
    }
    return wulff::kExitOk;
}
