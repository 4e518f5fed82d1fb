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

#include "soledge/solar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "soledge/kernels.hpp"

namespace soledge {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0, 1], got " +
                                    std::to_string(v));
    }
}

void check_cloud(const CloudModel& cloud) {
    switch (cloud.kind) {
    case CloudModel::Kind::None:
        break;
    case CloudModel::Kind::Constant:
        check_unit(cloud.attenuation, "cloud attenuation");
        break;
    case CloudModel::Kind::TwoState:
        check_unit(cloud.p_clear_to_cloudy, "p_clear_to_cloudy");
        check_unit(cloud.p_cloudy_to_clear, "p_cloudy_to_clear");
        check_unit(cloud.cloudy_attenuation, "cloudy_attenuation");
        break;
    }
}

// uniform in [0, 1) built from the top 53 bits, stable across platforms
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double PanelArray::effective_rating_w() const {
    return rated_w * derating * std::pow(1.0 - degradation_per_year, age_years);
}

double array_output_w(const PanelArray& array, double irradiance_fraction) {
    check_unit(irradiance_fraction, "irradiance fraction");
    double rating = array.effective_rating_w();
    if (!(rating > 0.0)) {
        throw std::invalid_argument("array effective rating must be positive, got " +
                                    std::to_string(rating));
    }
    return rating * irradiance_fraction;
}

IrradianceModel IrradianceModel::clear_sky(double sunrise_h, double sunset_h, CloudModel cloud) {
    if (!(sunrise_h >= 0.0 && sunrise_h < sunset_h && sunset_h <= 24.0)) {
        throw std::invalid_argument("need 0 <= sunrise < sunset <= 24, got sunrise " +
                                    std::to_string(sunrise_h) + ", sunset " +
                                    std::to_string(sunset_h));
    }
    check_cloud(cloud);
    IrradianceModel m;
    m.kind_ = Kind::ClearSky;
    m.sunrise_h_ = sunrise_h;
    m.sunset_h_ = sunset_h;
    m.cloud_ = cloud;
    return m;
}

IrradianceModel IrradianceModel::from_trace(std::vector<TracePoint> points, CloudModel cloud) {
    if (points.empty()) {
        throw std::invalid_argument("irradiance trace must not be empty");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].t_h > points[i - 1].t_h)) {
            throw std::invalid_argument("irradiance trace times must be strictly increasing (point " +
                                        std::to_string(i) + ")");
        }
    }
    check_cloud(cloud);
    IrradianceModel m;
    m.kind_ = Kind::Trace;
    m.points_ = std::move(points);
    m.cloud_ = cloud;
    return m;
}

IrradianceModel IrradianceModel::from_trace_file(const std::filesystem::path& path,
                                                 CloudModel cloud) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open irradiance trace: " + path.string());
    }
    std::vector<TracePoint> points;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        TracePoint p;
        if (!(fields >> p.t_h)) {
            continue;  // blank or comment-only line
        }
        double junk;
        if (!(fields >> p.fraction) || (fields >> junk)) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                        ": expected two columns (time_hours fraction)");
        }
        points.push_back(p);
    }
    return from_trace(std::move(points), cloud);
}

void IrradianceModel::prepare(double dt_h, std::size_t n_steps) {
    if (!(dt_h > 0.0)) {
        throw std::invalid_argument("dt must be positive, got " + std::to_string(dt_h));
    }
    prepared_dt_h_ = dt_h;
    cloud_factors_.clear();
    if (cloud_.kind != CloudModel::Kind::TwoState) {
        return;
    }
    cloud_factors_.resize(n_steps);
    std::mt19937_64 rng(cloud_.seed);
    bool cloudy = false;  // the chain starts clear
    for (std::size_t i = 0; i < n_steps; ++i) {
        cloud_factors_[i] = cloudy ? 1.0 - cloud_.cloudy_attenuation : 1.0;
        double u = u01(rng);
        if (!cloudy && u < cloud_.p_clear_to_cloudy) {
            cloudy = true;
        } else if (cloudy && u < cloud_.p_cloudy_to_clear) {
            cloudy = false;
        }
    }
}

double IrradianceModel::clear_fraction(double t_h) const {
    // same arithmetic as kernels::half_sine so at() agrees with series()
    double k = kPi / (sunset_h_ - sunrise_h_);
    double tau = t_h - 24.0 * std::floor(t_h / 24.0);
    if (tau < sunrise_h_ || tau > sunset_h_) {
        return 0.0;
    }
    double s = std::sin((tau - sunrise_h_) * k);
    return s < 0.0 ? 0.0 : s;
}

double IrradianceModel::trace_fraction(double t_h) const {
    if (t_h <= points_.front().t_h) {
        return points_.front().fraction;
    }
    if (t_h >= points_.back().t_h) {
        return points_.back().fraction;
    }
    auto it = std::upper_bound(points_.begin(), points_.end(), t_h,
                               [](double t, const TracePoint& p) { return t < p.t_h; });
    const TracePoint& hi = *it;
    const TracePoint& lo = *(it - 1);
    double w = (t_h - lo.t_h) / (hi.t_h - lo.t_h);
    return lo.fraction + w * (hi.fraction - lo.fraction);
}

double IrradianceModel::cloud_factor_at(double t_h) const {
    switch (cloud_.kind) {
    case CloudModel::Kind::None:
        return 1.0;
    case CloudModel::Kind::Constant:
        return 1.0 - cloud_.attenuation;
    case CloudModel::Kind::TwoState: {
        if (cloud_factors_.empty()) {
            throw std::logic_error("two-state cloud model queried before prepare()");
        }
        auto idx = static_cast<std::size_t>(std::floor(t_h / prepared_dt_h_));
        if (idx >= cloud_factors_.size()) {
            idx = cloud_factors_.size() - 1;
        }
        return cloud_factors_[idx];
    }
    }
    return 1.0;
}

double IrradianceModel::at(double t_h) const {
    if (t_h < 0.0) {
        throw std::invalid_argument("time must be non-negative, got " + std::to_string(t_h));
    }
    double base = kind_ == Kind::ClearSky ? clear_fraction(t_h)
                                          : std::clamp(trace_fraction(t_h), 0.0, 1.0);
    return base * cloud_factor_at(t_h);
}

std::vector<double> IrradianceModel::series(double dt_h, std::size_t n_steps) {
    prepare(dt_h, n_steps);
    std::vector<double> out(n_steps);
    if (n_steps == 0) {
        return out;
    }
    if (kind_ == Kind::ClearSky) {
        kernels::half_sine(0.0, dt_h, n_steps, sunrise_h_, sunset_h_, out.data());
    } else {
        for (std::size_t i = 0; i < n_steps; ++i) {
            out[i] = trace_fraction(static_cast<double>(i) * dt_h);
        }
        kernels::clamp(out.data(), n_steps, 0.0, 1.0, out.data());
    }
    switch (cloud_.kind) {
    case CloudModel::Kind::None:
        break;
    case CloudModel::Kind::Constant:
        kernels::scale(out.data(), n_steps, 1.0 - cloud_.attenuation, out.data());
        break;
    case CloudModel::Kind::TwoState:
        kernels::mul(out.data(), cloud_factors_.data(), n_steps, out.data());
        break;
    }
    return out;
}

double harvest_w(double available_w, double controller_limit_w, double battery_headroom_wh,
                 double dt_h, double charge_efficiency) {
    if (available_w < 0.0 || controller_limit_w < 0.0 || battery_headroom_wh < 0.0) {
        throw std::invalid_argument("harvest inputs must be non-negative");
    }
    if (!(dt_h > 0.0)) {
        throw std::invalid_argument("dt must be positive, got " + std::to_string(dt_h));
    }
    if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0)) {
        throw std::invalid_argument("charge efficiency must be in (0, 1], got " +
                                    std::to_string(charge_efficiency));
    }
    double headroom_w = battery_headroom_wh / (dt_h * charge_efficiency);
    return std::min({available_w, controller_limit_w, headroom_w});
}

}  // namespace soledge
