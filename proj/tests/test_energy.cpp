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

#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "soledge/energy.hpp"

using namespace soledge;

TEST_CASE("node power reproduces the measured currents exactly") {
    NodePowerProfile profile;
    // 260/480/730 mA on a 5 V rail; the currents are authoritative, the
    // often-quoted 1.4/2.4/3.7 W are display rounding of these values
    CHECK(node_power_w(profile, LoadLevel::idle()) == 1.30);
    CHECK(node_power_w(profile, LoadLevel::moderate()) == 2.40);
    CHECK(node_power_w(profile, LoadLevel::max()) == 3.65);
    CHECK(node_current_a(profile, LoadLevel::idle()) == 0.26);
    CHECK(node_current_a(profile, LoadLevel::moderate()) == 0.48);
    CHECK(node_current_a(profile, LoadLevel::max()) == 0.73);
}

TEST_CASE("custom load levels pin rail watts directly") {
    NodePowerProfile profile;
    LoadLevel pinned = LoadLevel::custom(7.5);
    CHECK(node_power_w(profile, pinned) == 7.5);
    CHECK(node_current_a(profile, pinned) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(node_power_w(profile, LoadLevel::custom(0.0)) == 0.0);
    CHECK_THROWS_AS(LoadLevel::custom(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(LoadLevel::custom(std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
    CHECK_THROWS_AS(LoadLevel::custom(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("profiles with disordered currents are rejected") {
    NodePowerProfile bad;
    bad.idle_current_a = 0.5;
    bad.moderate_current_a = 0.3;  // below idle
    CHECK_THROWS_AS(node_power_w(bad, LoadLevel::idle()), std::invalid_argument);
    NodePowerProfile zero;
    zero.idle_current_a = 0.0;
    CHECK_THROWS_AS(node_power_w(zero, LoadLevel::idle()), std::invalid_argument);
    NodePowerProfile volt;
    volt.supply_voltage_v = 0.0;
    CHECK_THROWS_AS(node_power_w(volt, LoadLevel::idle()), std::invalid_argument);
}

TEST_CASE("cluster bus power sums the rail and divides by efficiency") {
    DcDcConverter conv;  // 0.93
    std::vector<NodePowerProfile> profiles(5);
    std::vector<LoadLevel> idle(5, LoadLevel::idle());
    BusPower bus = cluster_bus_power(profiles, idle, conv);
    CHECK(bus.bus_w == doctest::Approx(6.989247311827957).epsilon(1e-14));
    CHECK(bus.rail_current_a == doctest::Approx(1.30).epsilon(1e-14));

    std::vector<LoadLevel> maxed(5, LoadLevel::max());
    bus = cluster_bus_power(profiles, maxed, conv);
    CHECK(bus.rail_current_a == doctest::Approx(3.65).epsilon(1e-14));
    CHECK(bus.bus_w == doctest::Approx(5 * 3.65 / 0.93).epsilon(1e-14));

    // an empty cluster is a valid 0 W bus
    bus = cluster_bus_power({}, {}, conv);
    CHECK(bus.bus_w == 0.0);
    CHECK(bus.rail_current_a == 0.0);
}

TEST_CASE("cluster bus power rejects bad shapes and converters") {
    DcDcConverter conv;
    std::vector<NodePowerProfile> profiles(2);
    std::vector<LoadLevel> levels(3, LoadLevel::idle());
    CHECK_THROWS_AS(cluster_bus_power(profiles, levels, conv), std::invalid_argument);

    DcDcConverter broken;
    broken.efficiency = 0.0;
    std::vector<LoadLevel> two(2, LoadLevel::idle());
    CHECK_THROWS_AS(cluster_bus_power(profiles, two, broken), std::invalid_argument);
    broken.efficiency = 1.5;
    CHECK_THROWS_AS(cluster_bus_power(profiles, two, broken), std::invalid_argument);
}

TEST_CASE("autonomy hours: usable energy over bus load") {
    Battery batt;  // 1200 Wh, usable 0.9
    CHECK(batt.capacity_wh() == 1200.0);
    CHECK(batt.usable_wh() == doctest::Approx(1080.0).epsilon(1e-15));
    CHECK(autonomy_hours(batt, 7.0) == doctest::Approx(154.28571428571428).epsilon(1e-14));
    CHECK(autonomy_hours(batt, 12.0) == doctest::Approx(90.0).epsilon(1e-14));
    CHECK(autonomy_hours(batt, 18.5) == doctest::Approx(58.37837837837838).epsilon(1e-14));
    CHECK_THROWS_AS(autonomy_hours(batt, 0.0), std::domain_error);
    CHECK_THROWS_AS(autonomy_hours(batt, -5.0), std::domain_error);

    Battery half = batt;
    half.capacity_ah = 50.0;
    CHECK(autonomy_hours(half, 7.0) ==
          doctest::Approx(154.28571428571428 / 2.0).epsilon(1e-14));
}

TEST_CASE("recharge time per hour of runtime") {
    CHECK(recharge_time_per_hour(7.0, 35.7) ==
          doctest::Approx(0.19607843137254902).epsilon(1e-14));
    CHECK(recharge_time_per_hour(12.0, 35.7) ==
          doctest::Approx(0.3361344537815126).epsilon(1e-14));
    CHECK(recharge_time_per_hour(18.5, 35.7) ==
          doctest::Approx(0.5182072829131652).epsilon(1e-14));
    // break-even: charging exactly covers the load
    CHECK(recharge_time_per_hour(20.0, 20.0) == 1.0);
    // doubled charger power halves the time
    CHECK(recharge_time_per_hour(7.0, 2 * 35.7) ==
          doctest::Approx(0.19607843137254902 / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(recharge_time_per_hour(0.0, 35.7), std::domain_error);
    CHECK_THROWS_AS(recharge_time_per_hour(7.0, 0.0), std::domain_error);
}

TEST_CASE("soc_step integrates, clamps, and accounts for what it clamped") {
    Battery batt;
    batt.soc_wh = 600.0;

    SUBCASE("plain discharge") {
        SocStep next = soc_step(batt, 0.0, 7.0, 0.05);
        CHECK(next.battery.soc_wh == doctest::Approx(600.0 - 0.35).epsilon(1e-15));
        CHECK(next.spill_wh == 0.0);
        CHECK(next.deficit_wh == 0.0);
    }

    SUBCASE("plain charge") {
        SocStep next = soc_step(batt, 40.0, 0.0, 0.5);
        CHECK(next.battery.soc_wh == doctest::Approx(620.0).epsilon(1e-15));
    }

    SUBCASE("charge efficiency scales stored energy") {
        batt.charge_efficiency = 0.8;
        SocStep next = soc_step(batt, 40.0, 0.0, 0.5);
        CHECK(next.battery.soc_wh == doctest::Approx(616.0).epsilon(1e-15));
    }

    SUBCASE("spill at the full clamp") {
        batt.soc_wh = batt.capacity_wh();
        SocStep next = soc_step(batt, 10.0, 0.0, 1.0);
        CHECK(next.battery.soc_wh == batt.capacity_wh());
        CHECK(next.spill_wh == doctest::Approx(10.0).epsilon(1e-15));
        CHECK(next.deficit_wh == 0.0);
    }

    SUBCASE("deficit at the empty clamp") {
        batt.soc_wh = 1.0;
        SocStep next = soc_step(batt, 0.0, 7.0, 1.0);
        CHECK(next.battery.soc_wh == 0.0);
        CHECK(next.deficit_wh == doctest::Approx(6.0).epsilon(1e-15));
        CHECK(next.spill_wh == 0.0);
    }

    SUBCASE("per-step conservation identity") {
        for (double charge : {0.0, 5.0, 400.0}) {
            for (double discharge : {0.0, 7.0, 2000.0}) {
                for (double soc : {0.0, 1.0, 600.0, 1200.0}) {
                    batt.soc_wh = soc;
                    SocStep next = soc_step(batt, charge, discharge, 0.25);
                    double lhs = next.battery.soc_wh - soc;
                    double rhs = (charge * batt.charge_efficiency - discharge) * 0.25 -
                                 next.spill_wh + next.deficit_wh;
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
                }
            }
        }
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(soc_step(batt, -1.0, 0.0, 0.05), std::invalid_argument);
        CHECK_THROWS_AS(soc_step(batt, 0.0, -1.0, 0.05), std::invalid_argument);
        CHECK_THROWS_AS(soc_step(batt, 0.0, 0.0, 0.0), std::invalid_argument);
    }
}
