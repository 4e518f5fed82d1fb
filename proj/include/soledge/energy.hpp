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

#ifndef SOLEDGE_ENERGY_HPP
#define SOLEDGE_ENERGY_HPP

#include <cstdint>
#include <span>

// Electrical arithmetic of the power chain: per-node draw on the 5 V rail,
// bus power on the 12 V battery side, battery autonomy and recharge budgets,
// and the per-step state-of-charge update. All energies are watt-hours, all
// times are hours, everything is double precision.
//
// Everything here is a pure function over value types and safe to call
// concurrently.

namespace soledge {

// Operating point of a node. Idle/Moderate/Max draw the profile's measured
// currents; Custom pins the node's rail power directly (used to replay
// measured cluster figures exactly).
struct LoadLevel {
    enum class Kind : std::uint8_t { Idle, Moderate, Max, Custom };

    Kind kind = Kind::Idle;
    double custom_w = 0.0;  // rail watts, Custom only

    static LoadLevel idle() { return {Kind::Idle, 0.0}; }
    static LoadLevel moderate() { return {Kind::Moderate, 0.0}; }
    static LoadLevel max() { return {Kind::Max, 0.0}; }
    // Throws std::invalid_argument unless watts is finite and >= 0.
    static LoadLevel custom(double watts);

    friend bool operator==(const LoadLevel&, const LoadLevel&) = default;
};

// Measured draw of one board at each benchmark level. Defaults are the
// Raspberry Pi 3B figures (260/480/730 mA on a 5 V rail).
struct NodePowerProfile {
    double supply_voltage_v = 5.0;
    double idle_current_a = 0.26;
    double moderate_current_a = 0.48;
    double max_current_a = 0.73;

    friend bool operator==(const NodePowerProfile&, const NodePowerProfile&) = default;
};

// Step-down converter between the 12 V bus and the 5 V node rail.
struct DcDcConverter {
    double efficiency = 0.93;          // fraction in (0, 1]
    double max_output_current_a = 8.0; // regulator rating on the 5 V side

    friend bool operator==(const DcDcConverter&, const DcDcConverter&) = default;
};

struct Battery {
    double nominal_voltage_v = 12.0;
    double capacity_ah = 100.0;
    double usable_fraction = 0.9;   // depth of discharge the planner allows
    double charge_efficiency = 1.0;
    double soc_wh = 1200.0;         // current stored energy

    double capacity_wh() const { return nominal_voltage_v * capacity_ah; }
    double usable_wh() const { return capacity_wh() * usable_fraction; }

    friend bool operator==(const Battery&, const Battery&) = default;
};

// A source feeding the charge bus: the PV chain behind an MPPT clamp, or a
// constant grid-tied backup. Delivered power never exceeds max_charge_power_w.
struct ChargeSource {
    enum class Kind : std::uint8_t { Solar, GridBackup };

    Kind kind = Kind::Solar;
    double constant_w = 0.0;           // GridBackup only
    double max_charge_power_w = 200.0; // controller/charger clamp

    friend bool operator==(const ChargeSource&, const ChargeSource&) = default;
};

// Rail current at a load level, watts via the rail voltage. Custom levels
// report custom_w and the implied current.
// Throws std::invalid_argument on an invalid profile or Custom level.
double node_power_w(const NodePowerProfile& profile, LoadLevel level);
double node_current_a(const NodePowerProfile& profile, LoadLevel level);

struct BusPower {
    double bus_w = 0.0;          // on the 12 V battery side
    double rail_current_a = 0.0; // total 5 V current, for display
};

// Total bus draw of the powered-on nodes, one level per node.
// An empty node list is a valid 0 W cluster; mismatched list lengths throw.
BusPower cluster_bus_power(std::span<const NodePowerProfile> profiles,
                           std::span<const LoadLevel> levels, const DcDcConverter& conv);

// Hours the battery sustains a constant bus load, drawing the usable
// fraction of nominal capacity. Throws std::domain_error for load_w <= 0
// (autonomy is unbounded there, never silently infinite).
double autonomy_hours(const Battery& batt, double load_w);

// Charging hours needed to replace one hour of consumption at load_w.
// Throws std::domain_error unless both arguments are > 0.
double recharge_time_per_hour(double load_w, double effective_charge_power_w);

struct SocStep {
    Battery battery;
    double spill_wh = 0.0;   // charge clamped away at full
    double deficit_wh = 0.0; // draw clamped away at empty
};

// One explicit-Euler step of the state of charge:
//   soc' = clamp(soc + (charge*charge_efficiency - discharge)*dt, 0, capacity)
// with the clamped-away energy returned for conservation accounting:
//   soc' - soc == (charge*eff - discharge)*dt - spill + deficit.
// Throws std::invalid_argument unless dt > 0 and both powers are >= 0.
SocStep soc_step(const Battery& batt, double charge_w, double discharge_w, double dt_h);

}  // namespace soledge

#endif  // SOLEDGE_ENERGY_HPP
