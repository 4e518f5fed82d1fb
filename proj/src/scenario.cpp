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

#include "soledge/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace soledge {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw std::invalid_argument(path + ": " + message);
}

void require_object(const json& value, const std::string& path) {
    if (!value.is_object()) {
        fail(path, "expected an object");
    }
}

void check_keys(const json& object, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* candidate : allowed) {
            if (key == candidate) {
                known = true;
                break;
            }
        }
        if (!known) {
            std::string expected;
            for (const char* candidate : allowed) {
                expected += expected.empty() ? "" : ", ";
                expected += candidate;
            }
            fail(path + "." + key, "unknown key (expected one of: " + expected + ")");
        }
    }
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        fail(path, "expected a number");
    }
    return value.get<double>();
}

int as_int(const json& value, const std::string& path) {
    if (!value.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return value.get<int>();
}

std::uint64_t as_uint(const json& value, const std::string& path) {
    if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return value.get<std::uint64_t>();
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) {
        fail(path, "expected a string");
    }
    return value.get<std::string>();
}

void merge(const json& object, const std::string& path, const char* key, double& target) {
    if (auto it = object.find(key); it != object.end()) {
        target = as_number(*it, path + "." + key);
    }
}

void merge(const json& object, const std::string& path, const char* key, int& target) {
    if (auto it = object.find(key); it != object.end()) {
        target = as_int(*it, path + "." + key);
    }
}

void merge(const json& object, const std::string& path, const char* key, std::uint64_t& target) {
    if (auto it = object.find(key); it != object.end()) {
        target = as_uint(*it, path + "." + key);
    }
}

void merge(const json& object, const std::string& path, const char* key, std::string& target) {
    if (auto it = object.find(key); it != object.end()) {
        target = as_string(*it, path + "." + key);
    }
}

LoadLevel parse_load_level(const json& value, const std::string& path) {
    if (value.is_string()) {
        std::string name = value.get<std::string>();
        if (name == "idle") {
            return LoadLevel::idle();
        }
        if (name == "moderate") {
            return LoadLevel::moderate();
        }
        if (name == "max") {
            return LoadLevel::max();
        }
        fail(path, "unknown load level '" + name +
                       "' (expected idle, moderate, max, or {\"custom_w\": watts})");
    }
    if (value.is_object()) {
        check_keys(value, path, {"custom_w"});
        auto it = value.find("custom_w");
        if (it == value.end()) {
            fail(path, "custom load level needs a custom_w key");
        }
        try {
            return LoadLevel::custom(as_number(*it, path + ".custom_w"));
        } catch (const std::invalid_argument& e) {
            fail(path + ".custom_w", e.what());
        }
    }
    fail(path, "expected a level name or {\"custom_w\": watts}");
}

json dump_load_level(const LoadLevel& level) {
    switch (level.kind) {
    case LoadLevel::Kind::Idle:
        return "idle";
    case LoadLevel::Kind::Moderate:
        return "moderate";
    case LoadLevel::Kind::Max:
        return "max";
    case LoadLevel::Kind::Custom:
        return json{{"custom_w", level.custom_w}};
    }
    return "idle";
}

CloudModel parse_cloud(const json& object, const std::string& path) {
    require_object(object, path);
    check_keys(object, path,
               {"kind", "attenuation", "p_clear_to_cloudy", "p_cloudy_to_clear",
                "cloudy_attenuation", "seed"});
    CloudModel cloud;
    std::string kind = "none";
    merge(object, path, "kind", kind);
    if (kind == "none") {
        cloud.kind = CloudModel::Kind::None;
    } else if (kind == "constant") {
        cloud.kind = CloudModel::Kind::Constant;
    } else if (kind == "two_state") {
        cloud.kind = CloudModel::Kind::TwoState;
    } else {
        fail(path + ".kind", "unknown cloud kind '" + kind +
                                 "' (expected none, constant, or two_state)");
    }
    merge(object, path, "attenuation", cloud.attenuation);
    merge(object, path, "p_clear_to_cloudy", cloud.p_clear_to_cloudy);
    merge(object, path, "p_cloudy_to_clear", cloud.p_cloudy_to_clear);
    merge(object, path, "cloudy_attenuation", cloud.cloudy_attenuation);
    merge(object, path, "seed", cloud.seed);
    return cloud;
}

void parse_irradiance(const json& object, const std::string& path, Scenario& out,
                      const std::filesystem::path& base_dir) {
    require_object(object, path);
    check_keys(object, path, {"kind", "sunrise_h", "sunset_h", "points", "file", "cloud"});

    CloudModel cloud;
    if (auto it = object.find("cloud"); it != object.end()) {
        cloud = parse_cloud(*it, path + ".cloud");
    }

    std::string kind = "clear_sky";
    merge(object, path, "kind", kind);
    try {
        if (kind == "clear_sky") {
            for (const char* key : {"points", "file"}) {
                if (object.contains(key)) {
                    fail(path + "." + key, "only valid for kind \"trace\"");
                }
            }
            double sunrise = 6.0;
            double sunset = 18.0;
            merge(object, path, "sunrise_h", sunrise);
            merge(object, path, "sunset_h", sunset);
            out.irradiance = IrradianceModel::clear_sky(sunrise, sunset, cloud);
        } else if (kind == "trace") {
            for (const char* key : {"sunrise_h", "sunset_h"}) {
                if (object.contains(key)) {
                    fail(path + "." + key, "only valid for kind \"clear_sky\"");
                }
            }
            bool has_points = object.contains("points");
            bool has_file = object.contains("file");
            if (has_points == has_file) {
                fail(path, "a trace needs exactly one of points or file");
            }
            if (has_file) {
                std::filesystem::path file = as_string(object.at("file"), path + ".file");
                if (file.is_relative() && !base_dir.empty()) {
                    file = base_dir / file;
                }
                out.irradiance = IrradianceModel::from_trace_file(file, cloud);
            } else {
                const json& points = object.at("points");
                if (!points.is_array()) {
                    fail(path + ".points", "expected an array of [time_h, fraction] pairs");
                }
                std::vector<TracePoint> trace;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    std::string ppath = path + ".points[" + std::to_string(i) + "]";
                    const json& pair = points[i];
                    if (!pair.is_array() || pair.size() != 2) {
                        fail(ppath, "expected a [time_h, fraction] pair");
                    }
                    trace.push_back({as_number(pair[0], ppath + "[0]"),
                                     as_number(pair[1], ppath + "[1]")});
                }
                out.irradiance = IrradianceModel::from_trace(std::move(trace), cloud);
            }
        } else {
            fail(path + ".kind",
                 "unknown irradiance kind '" + kind + "' (expected clear_sky or trace)");
        }
    } catch (const std::invalid_argument& e) {
        std::string what = e.what();
        // keep messages that already carry a field path
        if (what.rfind(path, 0) == 0) {
            throw;
        }
        fail(path, what);
    }
}

void parse_nodes(const json& array, const std::string& path, Scenario& out) {
    if (!array.is_array()) {
        fail(path, "expected an array of node objects");
    }
    out.nodes.clear();
    for (std::size_t i = 0; i < array.size(); ++i) {
        std::string npath = path + "[" + std::to_string(i) + "]";
        const json& item = array[i];
        require_object(item, npath);
        check_keys(item, npath,
                   {"id", "role", "profile", "cpu_capacity_millicores", "mem_capacity_mb"});
        Node node;
        node.id = static_cast<int>(i);
        merge(item, npath, "id", node.id);
        if (auto it = item.find("role"); it != item.end()) {
            std::string role = as_string(*it, npath + ".role");
            if (role == "master") {
                node.role = NodeRole::Master;
            } else if (role == "worker") {
                node.role = NodeRole::Worker;
            } else {
                fail(npath + ".role", "unknown role '" + role + "' (expected master or worker)");
            }
        }
        if (auto it = item.find("profile"); it != item.end()) {
            std::string ppath = npath + ".profile";
            require_object(*it, ppath);
            check_keys(*it, ppath,
                       {"supply_voltage_v", "idle_current_a", "moderate_current_a",
                        "max_current_a"});
            merge(*it, ppath, "supply_voltage_v", node.profile.supply_voltage_v);
            merge(*it, ppath, "idle_current_a", node.profile.idle_current_a);
            merge(*it, ppath, "moderate_current_a", node.profile.moderate_current_a);
            merge(*it, ppath, "max_current_a", node.profile.max_current_a);
        }
        merge(item, npath, "cpu_capacity_millicores", node.cpu_capacity_millicores);
        merge(item, npath, "mem_capacity_mb", node.mem_capacity_mb);
        out.nodes.push_back(node);
    }
}

void parse_services(const json& array, const std::string& path, Scenario& out) {
    if (!array.is_array()) {
        fail(path, "expected an array of service objects");
    }
    out.services.clear();
    for (std::size_t i = 0; i < array.size(); ++i) {
        std::string spath = path + "[" + std::to_string(i) + "]";
        const json& item = array[i];
        require_object(item, spath);
        check_keys(item, spath,
                   {"name", "cpu_millicores", "mem_mb", "priority", "load_contribution"});
        ServiceSpec service;
        if (!item.contains("name")) {
            fail(spath + ".name", "every service needs a name");
        }
        service.name = as_string(item.at("name"), spath + ".name");
        service.cpu_millicores = 100;
        service.mem_mb = 64;
        merge(item, spath, "cpu_millicores", service.cpu_millicores);
        merge(item, spath, "mem_mb", service.mem_mb);
        merge(item, spath, "priority", service.priority);
        if (auto it = item.find("load_contribution"); it != item.end()) {
            service.load_contribution = parse_load_level(*it, spath + ".load_contribution");
        }
        out.services.push_back(std::move(service));
    }
}

Scenario parse_text(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario JSON: ") + e.what());
    }
    require_object(root, "scenario");
    check_keys(root, "scenario",
               {"metadata", "battery", "initial_soc_fraction", "array", "irradiance",
                "converter", "canonical_bus_w", "charge", "nodes", "services", "sim"});

    Scenario out = default_scenario();
    if (auto it = root.find("metadata"); it != root.end()) {
        require_object(*it, "metadata");
        check_keys(*it, "metadata", {"name", "description"});
        merge(*it, "metadata", "name", out.metadata.name);
        merge(*it, "metadata", "description", out.metadata.description);
    }
    if (auto it = root.find("battery"); it != root.end()) {
        require_object(*it, "battery");
        check_keys(*it, "battery",
                   {"nominal_voltage_v", "capacity_ah", "usable_fraction", "charge_efficiency"});
        merge(*it, "battery", "nominal_voltage_v", out.battery.nominal_voltage_v);
        merge(*it, "battery", "capacity_ah", out.battery.capacity_ah);
        merge(*it, "battery", "usable_fraction", out.battery.usable_fraction);
        merge(*it, "battery", "charge_efficiency", out.battery.charge_efficiency);
    }
    if (auto it = root.find("initial_soc_fraction"); it != root.end()) {
        out.initial_soc_fraction = as_number(*it, "initial_soc_fraction");
    }
    if (auto it = root.find("array"); it != root.end()) {
        require_object(*it, "array");
        check_keys(*it, "array", {"rated_w", "derating", "degradation_per_year", "age_years"});
        merge(*it, "array", "rated_w", out.array.rated_w);
        merge(*it, "array", "derating", out.array.derating);
        merge(*it, "array", "degradation_per_year", out.array.degradation_per_year);
        merge(*it, "array", "age_years", out.array.age_years);
    }
    if (auto it = root.find("irradiance"); it != root.end()) {
        parse_irradiance(*it, "irradiance", out, base_dir);
    }
    if (auto it = root.find("converter"); it != root.end()) {
        require_object(*it, "converter");
        check_keys(*it, "converter", {"efficiency", "max_output_current_a"});
        merge(*it, "converter", "efficiency", out.converter.efficiency);
        merge(*it, "converter", "max_output_current_a", out.converter.max_output_current_a);
    }
    if (auto it = root.find("canonical_bus_w"); it != root.end()) {
        require_object(*it, "canonical_bus_w");
        check_keys(*it, "canonical_bus_w", {"idle_w", "moderate_w", "max_w"});
        merge(*it, "canonical_bus_w", "idle_w", out.canonical_bus_w.idle_w);
        merge(*it, "canonical_bus_w", "moderate_w", out.canonical_bus_w.moderate_w);
        merge(*it, "canonical_bus_w", "max_w", out.canonical_bus_w.max_w);
    }
    if (auto it = root.find("charge"); it != root.end()) {
        require_object(*it, "charge");
        check_keys(*it, "charge",
                   {"controller_limit_w", "effective_charge_power_w", "grid_backup_w"});
        merge(*it, "charge", "controller_limit_w", out.charge.controller_limit_w);
        merge(*it, "charge", "effective_charge_power_w", out.charge.effective_charge_power_w);
        merge(*it, "charge", "grid_backup_w", out.charge.grid_backup_w);
    }
    if (auto it = root.find("nodes"); it != root.end()) {
        parse_nodes(*it, "nodes", out);
    }
    if (auto it = root.find("services"); it != root.end()) {
        parse_services(*it, "services", out);
    }
    if (auto it = root.find("sim"); it != root.end()) {
        require_object(*it, "sim");
        check_keys(*it, "sim",
                   {"dt_h", "duration_h", "shutdown_soc_fraction", "restart_soc_fraction",
                    "seed"});
        merge(*it, "sim", "dt_h", out.sim.dt_h);
        merge(*it, "sim", "duration_h", out.sim.duration_h);
        merge(*it, "sim", "shutdown_soc_fraction", out.sim.shutdown_soc_fraction);
        merge(*it, "sim", "restart_soc_fraction", out.sim.restart_soc_fraction);
        merge(*it, "sim", "seed", out.sim.seed);
    }

    check_scenario(out);
    return out;
}

void check_fraction(double v, const char* path, bool allow_zero) {
    if (allow_zero ? !(v >= 0.0 && v <= 1.0) : !(v > 0.0 && v <= 1.0)) {
        fail(path, std::string("must be in ") + (allow_zero ? "[0, 1]" : "(0, 1]") + ", got " +
                       std::to_string(v));
    }
}

void check_positive(double v, const std::string& path) {
    if (!(v > 0.0)) {
        fail(path, "must be positive, got " + std::to_string(v));
    }
}

void check_non_negative(double v, const std::string& path) {
    if (!(v >= 0.0)) {
        fail(path, "must be non-negative, got " + std::to_string(v));
    }
}

}  // namespace

Scenario default_scenario() {
    Scenario s;
    s.metadata.name = "default";
    s.metadata.description =
        "Five-node solar-powered cluster with the six-service catalog and measured defaults";
    s.irradiance = IrradianceModel::clear_sky(6.0, 18.0);

    s.nodes.clear();
    for (int id = 0; id < 5; ++id) {
        Node node;
        node.id = id;
        node.role = id == 0 ? NodeRole::Master : NodeRole::Worker;
        s.nodes.push_back(node);
    }

    // catalog order mirrors the deployed stack; priority: lower sheds first
    auto service = [](std::string name, int cpu, int mem, int priority, LoadLevel load) {
        ServiceSpec spec;
        spec.name = std::move(name);
        spec.cpu_millicores = cpu;
        spec.mem_mb = mem;
        spec.priority = priority;
        spec.load_contribution = load;
        return spec;
    };
    s.services = {
        service("web", 500, 128, 50, LoadLevel::moderate()),
        service("db", 1000, 256, 60, LoadLevel::moderate()),
        service("email", 500, 128, 40, LoadLevel::idle()),
        service("ecommerce", 1500, 256, 30, LoadLevel::moderate()),
        service("marketing", 1000, 256, 10, LoadLevel::idle()),
        service("monitoring", 1000, 256, 20, LoadLevel::idle()),
    };
    return s;
}

void check_scenario(const Scenario& s) {
    check_positive(s.battery.nominal_voltage_v, "battery.nominal_voltage_v");
    check_positive(s.battery.capacity_ah, "battery.capacity_ah");
    check_fraction(s.battery.usable_fraction, "battery.usable_fraction", false);
    check_fraction(s.battery.charge_efficiency, "battery.charge_efficiency", false);
    check_fraction(s.initial_soc_fraction, "initial_soc_fraction", true);

    check_positive(s.array.rated_w, "array.rated_w");
    check_fraction(s.array.derating, "array.derating", false);
    if (!(s.array.degradation_per_year >= 0.0 && s.array.degradation_per_year < 1.0)) {
        fail("array.degradation_per_year", "must be in [0, 1), got " +
                                               std::to_string(s.array.degradation_per_year));
    }
    check_non_negative(s.array.age_years, "array.age_years");

    if (s.irradiance.kind() == IrradianceModel::Kind::ClearSky) {
        if (!(s.irradiance.sunrise_h() >= 0.0 && s.irradiance.sunrise_h() < s.irradiance.sunset_h() &&
              s.irradiance.sunset_h() <= 24.0)) {
            fail("irradiance.sunrise_h/sunset_h", "need 0 <= sunrise < sunset <= 24");
        }
    } else if (s.irradiance.points().empty()) {
        fail("irradiance.points", "trace must not be empty");
    }
    const CloudModel& cloud = s.irradiance.cloud();
    check_fraction(cloud.attenuation, "irradiance.cloud.attenuation", true);
    check_fraction(cloud.p_clear_to_cloudy, "irradiance.cloud.p_clear_to_cloudy", true);
    check_fraction(cloud.p_cloudy_to_clear, "irradiance.cloud.p_cloudy_to_clear", true);
    check_fraction(cloud.cloudy_attenuation, "irradiance.cloud.cloudy_attenuation", true);

    check_fraction(s.converter.efficiency, "converter.efficiency", false);
    check_positive(s.converter.max_output_current_a, "converter.max_output_current_a");

    check_positive(s.canonical_bus_w.idle_w, "canonical_bus_w.idle_w");
    if (!(s.canonical_bus_w.idle_w <= s.canonical_bus_w.moderate_w &&
          s.canonical_bus_w.moderate_w <= s.canonical_bus_w.max_w)) {
        fail("canonical_bus_w", "need idle_w <= moderate_w <= max_w");
    }

    check_non_negative(s.charge.controller_limit_w, "charge.controller_limit_w");
    check_non_negative(s.charge.effective_charge_power_w, "charge.effective_charge_power_w");
    check_non_negative(s.charge.grid_backup_w, "charge.grid_backup_w");

    if (s.nodes.empty()) {
        fail("nodes", "at least one node required");
    }
    std::set<int> ids;
    int masters = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        std::string path = "nodes[" + std::to_string(i) + "]";
        const Node& node = s.nodes[i];
        if (!ids.insert(node.id).second) {
            fail(path + ".id", "duplicate node id " + std::to_string(node.id));
        }
        masters += node.role == NodeRole::Master ? 1 : 0;
        if (node.cpu_capacity_millicores <= 0) {
            fail(path + ".cpu_capacity_millicores", "must be positive");
        }
        if (node.mem_capacity_mb <= 0) {
            fail(path + ".mem_capacity_mb", "must be positive");
        }
        const NodePowerProfile& p = node.profile;
        if (!(p.supply_voltage_v > 0.0)) {
            fail(path + ".profile.supply_voltage_v", "must be positive");
        }
        if (!(p.idle_current_a > 0.0 && p.idle_current_a <= p.moderate_current_a &&
              p.moderate_current_a <= p.max_current_a)) {
            fail(path + ".profile", "need 0 < idle <= moderate <= max currents");
        }
    }
    if (masters != 1) {
        fail("nodes", "exactly one master required, got " + std::to_string(masters));
    }

    if (s.services.size() > 64) {
        fail("services", "at most 64 services supported, got " +
                             std::to_string(s.services.size()));
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < s.services.size(); ++i) {
        std::string path = "services[" + std::to_string(i) + "]";
        const ServiceSpec& svc = s.services[i];
        if (svc.name.empty()) {
            fail(path + ".name", "must be non-empty");
        }
        if (!names.insert(svc.name).second) {
            fail(path + ".name", "duplicate service name '" + svc.name + "'");
        }
        if (svc.cpu_millicores <= 0) {
            fail(path + ".cpu_millicores", "must be positive");
        }
        if (svc.mem_mb <= 0) {
            fail(path + ".mem_mb", "must be positive");
        }
        if (svc.load_contribution.kind == LoadLevel::Kind::Custom &&
            !(std::isfinite(svc.load_contribution.custom_w) &&
              svc.load_contribution.custom_w >= 0.0)) {
            fail(path + ".load_contribution.custom_w", "must be finite and non-negative");
        }
    }

    check_sim_config(s.sim);
}

Scenario parse_scenario(const std::string& json_text) {
    return parse_text(json_text, {});
}

std::string serialize_scenario(const Scenario& s) {
    ordered_json root;
    root["metadata"] = {{"name", s.metadata.name}, {"description", s.metadata.description}};
    root["battery"] = {{"nominal_voltage_v", s.battery.nominal_voltage_v},
                       {"capacity_ah", s.battery.capacity_ah},
                       {"usable_fraction", s.battery.usable_fraction},
                       {"charge_efficiency", s.battery.charge_efficiency}};
    root["initial_soc_fraction"] = s.initial_soc_fraction;
    root["array"] = {{"rated_w", s.array.rated_w},
                     {"derating", s.array.derating},
                     {"degradation_per_year", s.array.degradation_per_year},
                     {"age_years", s.array.age_years}};

    ordered_json cloud;
    const CloudModel& c = s.irradiance.cloud();
    switch (c.kind) {
    case CloudModel::Kind::None:
        cloud["kind"] = "none";
        break;
    case CloudModel::Kind::Constant:
        cloud["kind"] = "constant";
        cloud["attenuation"] = c.attenuation;
        break;
    case CloudModel::Kind::TwoState:
        cloud["kind"] = "two_state";
        cloud["p_clear_to_cloudy"] = c.p_clear_to_cloudy;
        cloud["p_cloudy_to_clear"] = c.p_cloudy_to_clear;
        cloud["cloudy_attenuation"] = c.cloudy_attenuation;
        cloud["seed"] = c.seed;
        break;
    }
    ordered_json irradiance;
    if (s.irradiance.kind() == IrradianceModel::Kind::ClearSky) {
        irradiance["kind"] = "clear_sky";
        irradiance["sunrise_h"] = s.irradiance.sunrise_h();
        irradiance["sunset_h"] = s.irradiance.sunset_h();
    } else {
        irradiance["kind"] = "trace";
        // points are written inline so a file-based trace round-trips as-is
        ordered_json points = ordered_json::array();
        for (const TracePoint& p : s.irradiance.points()) {
            points.push_back({p.t_h, p.fraction});
        }
        irradiance["points"] = std::move(points);
    }
    irradiance["cloud"] = std::move(cloud);
    root["irradiance"] = std::move(irradiance);

    root["converter"] = {{"efficiency", s.converter.efficiency},
                         {"max_output_current_a", s.converter.max_output_current_a}};
    root["canonical_bus_w"] = {{"idle_w", s.canonical_bus_w.idle_w},
                               {"moderate_w", s.canonical_bus_w.moderate_w},
                               {"max_w", s.canonical_bus_w.max_w}};
    root["charge"] = {{"controller_limit_w", s.charge.controller_limit_w},
                      {"effective_charge_power_w", s.charge.effective_charge_power_w},
                      {"grid_backup_w", s.charge.grid_backup_w}};

    ordered_json nodes = ordered_json::array();
    for (const Node& n : s.nodes) {
        nodes.push_back({{"id", n.id},
                         {"role", n.role == NodeRole::Master ? "master" : "worker"},
                         {"profile",
                          {{"supply_voltage_v", n.profile.supply_voltage_v},
                           {"idle_current_a", n.profile.idle_current_a},
                           {"moderate_current_a", n.profile.moderate_current_a},
                           {"max_current_a", n.profile.max_current_a}}},
                         {"cpu_capacity_millicores", n.cpu_capacity_millicores},
                         {"mem_capacity_mb", n.mem_capacity_mb}});
    }
    root["nodes"] = std::move(nodes);

    ordered_json services = ordered_json::array();
    for (const ServiceSpec& svc : s.services) {
        services.push_back({{"name", svc.name},
                            {"cpu_millicores", svc.cpu_millicores},
                            {"mem_mb", svc.mem_mb},
                            {"priority", svc.priority},
                            {"load_contribution", dump_load_level(svc.load_contribution)}});
    }
    root["services"] = std::move(services);

    root["sim"] = {{"dt_h", s.sim.dt_h},
                   {"duration_h", s.sim.duration_h},
                   {"shutdown_soc_fraction", s.sim.shutdown_soc_fraction},
                   {"restart_soc_fraction", s.sim.restart_soc_fraction},
                   {"seed", s.sim.seed}};

    return root.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read scenario file: " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_text(text.str(), path.parent_path());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write scenario file: " + path.string());
    }
    out << serialize_scenario(scenario);
    out.flush();
    if (!out.good()) {
        throw std::runtime_error("failed writing scenario file: " + path.string());
    }
}

}  // namespace soledge
