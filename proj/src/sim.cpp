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

#include "soledge/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "soledge/kernels.hpp"
#include "soledge/scenario.hpp"
#include "soledge/solar.hpp"

namespace soledge {

namespace {

std::uint64_t full_mask(std::size_t n_services) {
    if (n_services == 0) {
        return 0;
    }
    return n_services >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_services) - 1;
}

}  // namespace

void check_sim_config(const SimConfig& config) {
    if (!(config.dt_h > 0.0)) {
        throw std::invalid_argument("sim.dt_h: must be positive, got " +
                                    std::to_string(config.dt_h));
    }
    if (!(config.duration_h >= config.dt_h)) {
        throw std::invalid_argument("sim.duration_h: must be at least one step, got " +
                                    std::to_string(config.duration_h));
    }
    if (!(config.shutdown_soc_fraction >= 0.0 &&
          config.shutdown_soc_fraction < config.restart_soc_fraction &&
          config.restart_soc_fraction <= 1.0)) {
        throw std::invalid_argument(
            "sim.shutdown_soc_fraction/restart_soc_fraction: need 0 <= shutdown < restart <= 1, "
            "got " +
            std::to_string(config.shutdown_soc_fraction) + " and " +
            std::to_string(config.restart_soc_fraction));
    }
}

TraceRecord Trace::record(std::size_t k) const {
    if (k >= size()) {
        throw std::out_of_range("trace record " + std::to_string(k) + " of " +
                                std::to_string(size()));
    }
    TraceRecord r;
    r.t_h = t_h[k];
    r.soc_wh = soc_wh[k];
    r.harvest_w = harvest_w[k];
    r.load_w_bus = load_w_bus[k];
    r.nodes_on = nodes_on[k];
    r.spill_wh = spill_wh[k];
    r.deficit_wh = deficit_wh[k];
    for (std::size_t i = 0; i < service_names.size(); ++i) {
        if (up_mask[k] & (std::uint64_t{1} << i)) {
            r.services_up.push_back(service_names[i]);
        }
    }
    return r;
}

std::map<std::string, double> availability_report(const Trace& trace) {
    if (trace.size() == 0) {
        throw std::domain_error("availability report needs a non-empty trace");
    }
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < trace.service_names.size(); ++i) {
        std::size_t up = 0;
        for (std::uint64_t mask : trace.up_mask) {
            up += (mask >> i) & 1u;
        }
        out[trace.service_names[i]] = static_cast<double>(up) / static_cast<double>(trace.size());
    }
    return out;
}

Simulation::Simulation(const Scenario& scenario) {
    check_scenario(scenario);

    battery_ = scenario.battery;
    initial_soc_wh_ = scenario.initial_soc_fraction * battery_.capacity_wh();
    battery_.soc_wh = initial_soc_wh_;
    converter_ = scenario.converter;
    config_ = scenario.sim;
    nodes_ = scenario.nodes;
    services_ = scenario.services;
    controller_limit_w_ = scenario.charge.controller_limit_w;
    grid_backup_w_ = scenario.charge.grid_backup_w;

    n_steps_ = static_cast<std::size_t>(
        std::ceil(config_.duration_h / config_.dt_h - 1e-9));
    if (n_steps_ == 0) {
        n_steps_ = 1;
    }

    if (!services_.empty()) {
        PlacementProblem problem{nodes_, services_, converter_};
        placement_ = local_search_improve(problem, greedy_place(problem));
    }
    std::unordered_map<int, std::size_t> node_by_id;
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        node_by_id[nodes_[n].id] = n;
    }
    host_of_service_.resize(services_.size());
    for (std::size_t s = 0; s < services_.size(); ++s) {
        host_of_service_[s] = node_by_id.at(placement_.assignment.at(services_[s].name));
    }

    // lowest priority sheds first; Master-hosted services outlive same-priority
    // Worker-hosted ones; name breaks the remaining ties
    shed_order_.resize(services_.size());
    std::iota(shed_order_.begin(), shed_order_.end(), std::size_t{0});
    std::sort(shed_order_.begin(), shed_order_.end(), [&](std::size_t a, std::size_t b) {
        auto key = [&](std::size_t s) {
            bool on_master = nodes_[host_of_service_[s]].role == NodeRole::Master;
            return std::make_tuple(services_[s].priority, on_master, services_[s].name);
        };
        return key(a) < key(b);
    });

    IrradianceModel irradiance = scenario.irradiance;
    std::vector<double> fraction = irradiance.series(config_.dt_h, n_steps_);
    available_w_.resize(n_steps_);
    kernels::scale(fraction.data(), n_steps_, scenario.array.effective_rating_w(),
                   available_w_.data());

    trace_.dt_h = config_.dt_h;
    for (const ServiceSpec& s : services_) {
        trace_.service_names.push_back(s.name);
    }
    auto reserve_all = [&](auto&... cols) { (cols.reserve(n_steps_), ...); };
    reserve_all(trace_.t_h, trace_.soc_wh, trace_.harvest_w, trace_.load_w_bus, trace_.nodes_on,
                trace_.up_mask, trace_.spill_wh, trace_.deficit_wh);

    running_ = full_mask(services_.size());
}

double Simulation::bus_load_w(int* nodes_on) const {
    std::vector<NodePowerProfile> profiles;
    std::vector<LoadLevel> levels;
    if (running_ != 0) {
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            LoadLevel level = LoadLevel::idle();
            double watts = node_power_w(nodes_[n].profile, level);
            bool hosting = false;
            for (std::size_t s = 0; s < services_.size(); ++s) {
                if (host_of_service_[s] != n || !(running_ & (std::uint64_t{1} << s))) {
                    continue;
                }
                hosting = true;
                double w = node_power_w(nodes_[n].profile, services_[s].load_contribution);
                if (w > watts) {
                    watts = w;
                    level = services_[s].load_contribution;
                }
            }
            if (!hosting && nodes_[n].role != NodeRole::Master) {
                continue;  // empty worker is off; the Master powers off last
            }
            profiles.push_back(nodes_[n].profile);
            levels.push_back(level);
        }
    }
    *nodes_on = static_cast<int>(profiles.size());
    return cluster_bus_power(profiles, levels, converter_).bus_w;
}

void Simulation::step() {
    if (done()) {
        throw std::logic_error("simulation already ran its " + std::to_string(n_steps_) +
                               " steps");
    }
    double t = static_cast<double>(step_) * config_.dt_h;

    int nodes_on = 0;
    double load_w = bus_load_w(&nodes_on);

    double headroom_wh = battery_.capacity_wh() - battery_.soc_wh;
    if (headroom_wh < 0.0) {
        headroom_wh = 0.0;
    }
    double charge_w = harvest_w(available_w_[step_], controller_limit_w_, headroom_wh,
                                config_.dt_h, battery_.charge_efficiency);
    if (grid_backup_w_ > 0.0) {
        double left_wh = headroom_wh - charge_w * battery_.charge_efficiency * config_.dt_h;
        charge_w += harvest_w(grid_backup_w_, grid_backup_w_, left_wh < 0.0 ? 0.0 : left_wh,
                              config_.dt_h, battery_.charge_efficiency);
    }

    SocStep next = soc_step(battery_, charge_w, load_w, config_.dt_h);
    battery_ = next.battery;

    trace_.t_h.push_back(t);
    trace_.soc_wh.push_back(battery_.soc_wh);
    trace_.harvest_w.push_back(charge_w);
    trace_.load_w_bus.push_back(load_w);
    trace_.nodes_on.push_back(nodes_on);
    trace_.up_mask.push_back(running_);
    trace_.spill_wh.push_back(next.spill_wh);
    trace_.deficit_wh.push_back(next.deficit_wh);

    apply_policy();
    ++step_;
}

// Observes the end-of-step state and moves at most one service, so the
// change takes effect at the next step. Restores pop the shed stack.
void Simulation::apply_policy() {
    double cap = battery_.capacity_wh();
    double eps = 1e-9 * cap;  // grid-crossing guard against rounding drift
    double soc = battery_.soc_wh;
    if (soc <= config_.shutdown_soc_fraction * cap + eps) {
        if (shed_count_ < shed_order_.size()) {
            running_ &= ~(std::uint64_t{1} << shed_order_[shed_count_]);
            ++shed_count_;
            ++shed_events_;
        }
    } else if (soc >= config_.restart_soc_fraction * cap - eps) {
        if (shed_count_ > 0) {
            --shed_count_;
            running_ |= std::uint64_t{1} << shed_order_[shed_count_];
            ++restore_events_;
        }
    }
}

SummaryMetrics Simulation::metrics() const {
    SummaryMetrics m;
    m.dt_h = config_.dt_h;
    m.steps = trace_.size();
    m.duration_h = static_cast<double>(m.steps) * config_.dt_h;
    m.shed_events = shed_events_;
    m.restore_events = restore_events_;
    m.final_soc_wh = battery_.soc_wh;
    m.min_soc_wh = initial_soc_wh_;
    if (m.steps == 0) {
        return m;
    }

    std::size_t n = m.steps;
    m.min_soc_wh = std::min(initial_soc_wh_, kernels::min(trace_.soc_wh.data(), n));
    m.harvested_wh = kernels::sum(trace_.harvest_w.data(), n) * config_.dt_h;
    m.consumed_wh = kernels::sum(trace_.load_w_bus.data(), n) * config_.dt_h;
    m.spilled_wh = kernels::sum(trace_.spill_wh.data(), n);
    m.deficit_wh = kernels::sum(trace_.deficit_wh.data(), n);

    double stored = m.harvested_wh * battery_.charge_efficiency;
    double delta = m.final_soc_wh - initial_soc_wh_;
    double residual = stored - m.consumed_wh - delta - m.spilled_wh + m.deficit_wh;
    double scale = std::max(1.0, std::abs(stored) + std::abs(m.consumed_wh) + std::abs(delta) +
                                     std::abs(m.spilled_wh) + std::abs(m.deficit_wh));
    m.ledger_residual_rel = std::abs(residual) / scale;

    if (!services_.empty()) {
        m.availability = availability_report(trace_);
        std::uint64_t full = full_mask(services_.size());
        for (std::size_t i = 0; i < services_.size(); ++i) {
            double avail = m.availability.at(services_[i].name);
            double down = (1.0 - avail) * m.duration_h;
            m.downtime_h[services_[i].name] = down;
            m.total_downtime_h += down;
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (trace_.up_mask[k] != full) {
                m.first_outage_h = trace_.t_h[k];
                break;
            }
        }
    }
    return m;
}

RunResult Simulation::run(const Scenario& scenario) {
    Simulation sim(scenario);
    while (!sim.done()) {
        sim.step();
    }
    RunResult result;
    result.metrics = sim.metrics();
    result.trace = std::move(sim.trace_);
    return result;
}

}  // namespace soledge
