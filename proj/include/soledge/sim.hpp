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

#ifndef SOLEDGE_SIM_HPP
#define SOLEDGE_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "soledge/energy.hpp"
#include "soledge/scheduler.hpp"

// Discrete-time state machine coupling solar input, battery, and the
// node/service cluster, with threshold+hysteresis load shedding.

namespace soledge {

struct Scenario;

struct SimConfig {
    double dt_h = 0.05;
    double duration_h = 336.0;  // two weeks
    double shutdown_soc_fraction = 0.10;
    double restart_soc_fraction = 0.25;
    std::uint64_t seed = 1;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Throws std::invalid_argument unless dt > 0, duration >= dt, and
// 0 <= shutdown < restart <= 1.
void check_sim_config(const SimConfig& config);

struct TraceRecord {
    double t_h = 0.0;       // step start
    double soc_wh = 0.0;    // state of charge at step end
    double harvest_w = 0.0;
    double load_w_bus = 0.0;
    int nodes_on = 0;
    std::vector<std::string> services_up;  // catalog order
    double spill_wh = 0.0;
    double deficit_wh = 0.0;
};

// Column-wise trace, one entry per step. Bit i of up_mask is catalog
// service i (the catalog is capped at 64 services).
struct Trace {
    double dt_h = 0.0;
    std::vector<std::string> service_names;  // catalog order

    std::vector<double> t_h;
    std::vector<double> soc_wh;
    std::vector<double> harvest_w;
    std::vector<double> load_w_bus;
    std::vector<int> nodes_on;
    std::vector<std::uint64_t> up_mask;
    std::vector<double> spill_wh;
    std::vector<double> deficit_wh;

    std::size_t size() const { return t_h.size(); }
    TraceRecord record(std::size_t k) const;
};

struct SummaryMetrics {
    double duration_h = 0.0;
    double dt_h = 0.0;
    std::size_t steps = 0;
    double min_soc_wh = 0.0;
    double final_soc_wh = 0.0;
    double harvested_wh = 0.0;  // delivered to the charge path, before charge efficiency
    double consumed_wh = 0.0;   // bus energy drawn
    double spilled_wh = 0.0;
    double deficit_wh = 0.0;
    // |harvested*eff - consumed - dSoC - spill + deficit| over
    // max(1, sum of term magnitudes)
    double ledger_residual_rel = 0.0;
    double first_outage_h = -1.0;  // -1 when every service ran the whole time
    double total_downtime_h = 0.0; // summed across services
    int shed_events = 0;
    int restore_events = 0;
    std::map<std::string, double> availability;  // per service, fraction of steps up
    std::map<std::string, double> downtime_h;
};

// availability(s) = steps with s up / total steps.
// Throws std::domain_error on an empty trace.
std::map<std::string, double> availability_report(const Trace& trace);

struct RunResult {
    Trace trace;
    SummaryMetrics metrics;
};

// One scenario run. Construction validates the scenario, places the catalog
// (greedy + local search), sorts the shedding order, and realizes the
// irradiance series for the whole grid, so that stepping is pure arithmetic.
//
// Step order is fixed: (1) harvest from the step's irradiance, (2) bus load
// of the powered nodes at their service-induced levels, (3) soc_step,
// (4) shed/restore policy for the next step. The policy observes the step's
// end state and acts one step later; at most one service sheds or restores
// per step, and restores undo sheds in reverse order.
//
// A node is powered while it hosts at least one running service; the Master
// also stays powered while any service runs anywhere, and powers off last.
class Simulation {
public:
    explicit Simulation(const Scenario& scenario);

    std::size_t n_steps() const { return n_steps_; }
    std::size_t step_index() const { return step_; }
    bool done() const { return step_ >= n_steps_; }

    double soc_wh() const { return battery_.soc_wh; }
    std::uint64_t running_mask() const { return running_; }
    const Placement& placement() const { return placement_; }
    // catalog indices in shed order (first entry sheds first)
    const std::vector<std::size_t>& shed_order() const { return shed_order_; }
    const Trace& trace() const { return trace_; }

    // Advance one step; throws std::logic_error past the end.
    void step();

    // Metrics over the steps taken so far.
    SummaryMetrics metrics() const;

    static RunResult run(const Scenario& scenario);

private:
    double bus_load_w(int* nodes_on) const;
    void apply_policy();

    // frozen configuration
    Battery battery_;  // soc_wh is live state
    DcDcConverter converter_;
    SimConfig config_;
    std::vector<Node> nodes_;
    std::vector<ServiceSpec> services_;
    Placement placement_;
    std::vector<std::size_t> host_of_service_;  // node index per catalog index
    std::vector<std::size_t> shed_order_;
    std::vector<double> available_w_;  // PV power offered per step
    double controller_limit_w_ = 200.0;
    double grid_backup_w_ = 0.0;
    double initial_soc_wh_ = 0.0;

    // live state
    std::size_t n_steps_ = 0;
    std::size_t step_ = 0;
    std::uint64_t running_ = 0;
    std::size_t shed_count_ = 0;  // how many from shed_order_ are down
    int shed_events_ = 0;
    int restore_events_ = 0;
    Trace trace_;
};

}  // namespace soledge

#endif  // SOLEDGE_SIM_HPP
