// Copyright 2026-present the soledge project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soledge/commands.hpp"
#include "soledge/scenario.hpp"

namespace {

// 0 success, 2 validation error, 3 I/O error
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soledge: capacity planner and simulator for a solar-powered SBC cluster"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double dt_h = 0.0;
    bool dt_set = false;

    app.add_option("--scenario", scenario_path, "Scenario JSON file (defaults built in)");
    app.add_option("--out", out_dir, "Output directory for trace/summary/sweep files")
        ->capture_default_str();
    app.add_option("--seed", seed, "Override the sim seed and any two-state cloud seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--dt", dt_h, "Override the step size in hours")
        ->each([&](const std::string&) { dt_set = true; });

    CLI::App* autonomy = app.add_subcommand("autonomy", "Battery autonomy table per load level");
    CLI::App* recharge = app.add_subcommand("recharge", "Recharge time table per load level");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run the scenario; write trace and summary");

    CLI::App* plan = app.add_subcommand("plan", "Place the service catalog onto nodes");
    bool with_oracle = false;
    plan->add_flag("--oracle", with_oracle, "Also run the brute-force oracle (small instances)");

    CLI::App* sweep = app.add_subcommand("sweep", "Run the scenario across a parameter grid");
    std::string sweep_param;
    std::vector<double> sweep_values;
    sweep->add_option("--param", sweep_param, "capacity_wh, array_rated_w, cloud_attenuation, or load_level")
        ->required();
    sweep->add_option("--values", sweep_values, "Comma-separated grid values")
        ->required()
        ->delimiter(',');

    // accept the global options after the subcommand too
    for (CLI::App* sub : {autonomy, recharge, simulate, plan, sweep}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        soledge::Scenario scenario =
            scenario_path.empty() ? soledge::default_scenario()
                                  : soledge::load_scenario(scenario_path);
        if (seed_set) {
            soledge::override_seed(scenario, seed);
        }
        if (dt_set) {
            soledge::override_dt(scenario, dt_h);
        }

        if (autonomy->parsed()) {
            std::cout << soledge::render_autonomy(scenario);
        } else if (recharge->parsed()) {
            std::cout << soledge::render_recharge(scenario);
        } else if (simulate->parsed()) {
            std::cout << soledge::cmd_simulate(scenario, out_dir);
        } else if (plan->parsed()) {
            std::cout << soledge::render_plan(scenario, with_oracle);
        } else if (sweep->parsed()) {
            std::cout << soledge::cmd_sweep(scenario, sweep_param, sweep_values, out_dir);
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
