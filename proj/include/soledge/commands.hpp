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

#ifndef SOLEDGE_COMMANDS_HPP
#define SOLEDGE_COMMANDS_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "soledge/scenario.hpp"
#include "soledge/sim.hpp"

// The CLI subcommands as plain functions over a Scenario, so they are
// testable without a process boundary. All numeric output goes through one
// snprintf-based formatter; identical inputs yield byte-identical text.
//
// Errors: std::invalid_argument / std::domain_error for validation problems,
// std::runtime_error for I/O (the executable maps these to exit codes 2/3).

namespace soledge {

// Canonical benchmark rows (plus one row per distinct Custom service level).
struct LoadRow {
    std::string label;
    double rail_current_a = 0.0;       // summed over all nodes at this level
    double bus_w = 0.0;                // measured bus draw (canonical) or rail/efficiency
    double implied_efficiency = 0.0;   // rail watts / bus watts
};

std::vector<LoadRow> load_rows(const Scenario& scenario);

// Autonomy table: current @5V, power @12V, autonomy hours per row, with the
// per-row implied converter efficiency as an audit footer.
std::string render_autonomy(const Scenario& scenario);

// Recharge table: hours of charging per hour of runtime at each level.
// Throws std::invalid_argument with setup instructions when
// charge.effective_charge_power_w is unset (zero).
std::string render_recharge(const Scenario& scenario);

// Placement report: greedy + local search (and the brute-force oracle when
// requested); service table, objective watts, projected autonomy.
std::string render_plan(const Scenario& scenario, bool with_oracle);

// Delimited trace: a header line, then one record per step in TraceRecord
// field order. services_up is ';'-joined in catalog order, '-' when empty.
void write_trace(const Trace& trace, std::ostream& out);

// "key: value" lines with stable key names (see README).
void write_summary(const Scenario& scenario, const SummaryMetrics& metrics, std::ostream& out);

// Runs the scenario, writes <out_dir>/trace.tsv and <out_dir>/summary.txt,
// returns the headline metrics text.
std::string cmd_simulate(const Scenario& scenario, const std::filesystem::path& out_dir);

// sweepable scenario knobs
const std::vector<std::string>& sweep_parameters();

// A copy of the scenario with one whitelisted parameter replaced. Throws
// std::invalid_argument for unknown names (the message lists the whitelist)
// or out-of-range values.
Scenario apply_sweep_value(const Scenario& scenario, const std::string& parameter, double value);

// One simulation per value, merged in grid order; writes <out_dir>/sweep.tsv
// and returns the same table.
std::string cmd_sweep(const Scenario& scenario, const std::string& parameter,
                      const std::vector<double>& values, const std::filesystem::path& out_dir);

// CLI overrides: --seed replaces both the sim seed and a two-state cloud
// seed; --dt replaces the step size.
void override_seed(Scenario& scenario, std::uint64_t seed);
void override_dt(Scenario& scenario, double dt_h);

}  // namespace soledge

#endif  // SOLEDGE_COMMANDS_HPP
