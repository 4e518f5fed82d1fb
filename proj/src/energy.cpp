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

#include "soledge/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace soledge {

namespace {

void check_profile(const NodePowerProfile& p) {
    if (!(p.supply_voltage_v > 0.0) || !std::isfinite(p.supply_voltage_v)) {
        throw std::invalid_argument("node profile: supply voltage must be positive");
    }
    if (!(p.idle_current_a > 0.0) || !(p.idle_current_a <= p.moderate_current_a) ||
        !(p.moderate_current_a <= p.max_current_a)) {
        throw std::invalid_argument(
            "node profile: requires 0 < idle_current <= moderate_current <= max_current");
    }
}

}  // namespace

LoadLevel LoadLevel::custom(double watts) {
    if (!std::isfinite(watts) || watts < 0.0) {
        throw std::invalid_argument("custom load level: power must be finite and >= 0");
    }
    return {Kind::Custom, watts};
}

double node_power_w(const NodePowerProfile& profile, LoadLevel level) {
    check_profile(profile);
    switch (level.kind) {
        case LoadLevel::Kind::Idle:
            return profile.idle_current_a * profile.supply_voltage_v;
        case LoadLevel::Kind::Moderate:
            return profile.moderate_current_a * profile.supply_voltage_v;
        case LoadLevel::Kind::Max:
            return profile.max_current_a * profile.supply_voltage_v;
        case LoadLevel::Kind::Custom:
            if (!std::isfinite(level.custom_w) || level.custom_w < 0.0) {
                throw std::invalid_argument("custom load level: power must be finite and >= 0");
            }
            return level.custom_w;
    }
    throw std::invalid_argument("unknown load level");
}

double node_current_a(const NodePowerProfile& profile, LoadLevel level) {
    return node_power_w(profile, level) / profile.supply_voltage_v;
}

BusPower cluster_bus_power(std::span<const NodePowerProfile> profiles,
                           std::span<const LoadLevel> levels, const DcDcConverter& conv) {
    if (profiles.size() != levels.size()) {
        throw std::invalid_argument("cluster_bus_power: one level per node required (" +
                                    std::to_string(profiles.size()) + " profiles, " +
                                    std::to_string(levels.size()) + " levels)");
    }
    if (!(conv.efficiency > 0.0) || conv.efficiency > 1.0) {
        throw std::invalid_argument("converter efficiency must be in (0, 1]");
    }
    BusPower out;
    double rail_w = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        rail_w += node_power_w(profiles[i], levels[i]);
        out.rail_current_a += node_current_a(profiles[i], levels[i]);
    }
    out.bus_w = rail_w / conv.efficiency;
    return out;
}

double autonomy_hours(const Battery& batt, double load_w) {
    if (!(load_w > 0.0) || !std::isfinite(load_w)) {
        throw std::domain_error("autonomy: load must be > 0 W");
    }
    return batt.usable_wh() / load_w;
}

double recharge_time_per_hour(double load_w, double effective_charge_power_w) {
    if (!(load_w > 0.0) || !std::isfinite(load_w)) {
        throw std::domain_error("recharge time: load must be > 0 W");
    }
    if (!(effective_charge_power_w > 0.0) || !std::isfinite(effective_charge_power_w)) {
        throw std::domain_error("recharge time: effective charge power must be > 0 W");
    }
    return load_w / effective_charge_power_w;
}

SocStep soc_step(const Battery& batt, double charge_w, double discharge_w, double dt_h) {
    if (!(dt_h > 0.0) || !std::isfinite(dt_h)) {
        throw std::invalid_argument("soc_step: dt must be > 0");
    }
    if (charge_w < 0.0 || discharge_w < 0.0 || !std::isfinite(charge_w) ||
        !std::isfinite(discharge_w)) {
        throw std::invalid_argument("soc_step: powers must be finite and >= 0");
    }
    const double cap = batt.capacity_wh();
    const double raw = batt.soc_wh + (charge_w * batt.charge_efficiency - discharge_w) * dt_h;

    SocStep out;
    out.battery = batt;
    if (raw > cap) {
        out.spill_wh = raw - cap;
        out.battery.soc_wh = cap;
    } else if (raw < 0.0) {
        out.deficit_wh = -raw;
        out.battery.soc_wh = 0.0;
    } else {
        out.battery.soc_wh = raw;
    }
    return out;
}

}  // namespace soledge
