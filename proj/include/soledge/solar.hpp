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

#ifndef SOLEDGE_SOLAR_HPP
#define SOLEDGE_SOLAR_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

// Charging power available from the PV array as a function of time, weather,
// and panel age.

namespace soledge {

struct PanelArray {
    double rated_w = 200.0;             // 2 x 100 W panels
    double derating = 0.8;              // soiling/temperature/wiring losses
    double degradation_per_year = 0.005;
    double age_years = 0.0;

    // rated * derating * (1 - degradation)^age; must stay > 0
    double effective_rating_w() const;

    friend bool operator==(const PanelArray&, const PanelArray&) = default;
};

// Array output at a sky fraction in [0, 1]. Throws std::invalid_argument on
// an out-of-range fraction or a non-positive effective rating.
double array_output_w(const PanelArray& array, double irradiance_fraction);

// Attenuation is the fraction of light removed: the applied sky factor is
// 1 - attenuation. TwoState is a seeded per-step Markov chain between clear
// and cloudy; its whole evolution is determined by the seed.
struct CloudModel {
    enum class Kind : std::uint8_t { None, Constant, TwoState };

    Kind kind = Kind::None;
    double attenuation = 0.0;          // Constant
    double p_clear_to_cloudy = 0.0;    // TwoState, per step
    double p_cloudy_to_clear = 0.0;    // TwoState, per step
    double cloudy_attenuation = 0.0;   // TwoState
    std::uint64_t seed = 1;

    friend bool operator==(const CloudModel&, const CloudModel&) = default;
};

struct TracePoint {
    double t_h = 0.0;
    double fraction = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

// Sky fraction over scenario time. ClearSky is a half sine between sunrise
// and sunset repeating every 24 h; Trace interpolates a measured series
// linearly (endpoints held outside its range) and clamps to [0, 1]. Cloud
// attenuation multiplies either shape.
//
// A TwoState cloud sequence is realized per simulation grid: call prepare()
// (or series(), which prepares) before evaluating, so that evaluation order
// can never change results.
class IrradianceModel {
public:
    enum class Kind : std::uint8_t { ClearSky, Trace };

    IrradianceModel() = default;

    // Throws std::invalid_argument unless 0 <= sunrise < sunset <= 24.
    static IrradianceModel clear_sky(double sunrise_h, double sunset_h, CloudModel cloud = {});
    // Throws std::invalid_argument unless points is non-empty with strictly
    // increasing times.
    static IrradianceModel from_trace(std::vector<TracePoint> points, CloudModel cloud = {});
    // Two-column delimited text (time_hours fraction), '#' comments allowed.
    static IrradianceModel from_trace_file(const std::filesystem::path& path,
                                           CloudModel cloud = {});

    Kind kind() const { return kind_; }
    double sunrise_h() const { return sunrise_h_; }
    double sunset_h() const { return sunset_h_; }
    const std::vector<TracePoint>& points() const { return points_; }
    const CloudModel& cloud() const { return cloud_; }

    // Realize the seeded cloud sequence for an n-step grid of width dt.
    void prepare(double dt_h, std::size_t n_steps);
    bool prepared() const { return !cloud_factors_.empty() || cloud_.kind != CloudModel::Kind::TwoState; }

    // Sky fraction at t hours since scenario start, cloud factor applied.
    // Throws std::logic_error for an unprepared TwoState model and
    // std::invalid_argument for t < 0.
    double at(double t_h) const;

    // Fractions at t = 0, dt, ..., (n-1)*dt; prepares the cloud sequence.
    std::vector<double> series(double dt_h, std::size_t n_steps);

    // Config identity only; a prepared cloud sequence does not participate.
    friend bool operator==(const IrradianceModel& a, const IrradianceModel& b) {
        return a.kind_ == b.kind_ && a.sunrise_h_ == b.sunrise_h_ && a.sunset_h_ == b.sunset_h_ &&
               a.points_ == b.points_ && a.cloud_ == b.cloud_;
    }

private:
    double clear_fraction(double t_h) const;
    double trace_fraction(double t_h) const;
    double cloud_factor_at(double t_h) const;

    Kind kind_ = Kind::ClearSky;
    double sunrise_h_ = 6.0;
    double sunset_h_ = 18.0;
    std::vector<TracePoint> points_;
    CloudModel cloud_;

    // realized TwoState factors, one per step
    double prepared_dt_h_ = 0.0;
    std::vector<double> cloud_factors_;
};

// Charging power actually delivered: min(available, controller limit,
// remaining battery headroom over this step adjusted for charge efficiency).
// Never overfills the battery. Throws std::invalid_argument on negative
// inputs, dt <= 0, or efficiency outside (0, 1].
double harvest_w(double available_w, double controller_limit_w, double battery_headroom_wh,
                 double dt_h, double charge_efficiency = 1.0);

}  // namespace soledge

#endif  // SOLEDGE_SOLAR_HPP
