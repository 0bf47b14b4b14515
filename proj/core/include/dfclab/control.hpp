#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "dfclab/errors.hpp"

namespace dfclab::control {

/// Relative compressor speed, the single actuator of every strategy.
struct ControlState {
    double n_set = 0.0;
};

using ControlPlan = std::vector<ControlState>;

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Time-phased comfort targets: day setpoint inside the day window, night
/// setpoint otherwise, with a symmetric tolerance band.
struct ComfortSchedule {
    double day_setpoint_c = 21.0;
    double night_setpoint_c = 19.0;
    double band_c = 0.5;
    int day_start_hour = 7;
    int day_end_hour = 18;

    bool day_at(double seconds_of_day) const {
        const double h = seconds_of_day / 3600.0;
        return h >= day_start_hour && h < day_end_hour;
    }
    double setpoint_at(double seconds_of_day) const {
        return day_at(seconds_of_day) ? day_setpoint_c : night_setpoint_c;
    }

    void validate() const;
};

struct PidConfig {
    double kp = 0.4;   ///< per K
    double ki = 0.002; ///< per K*s
    double kd = 0.0;   ///< per K/s

    void validate() const;
};

struct PidState {
    double integral = 0.0; ///< accumulated error, K*s
    double prev_error = 0.0;
    bool has_prev = false;
};

/// One discrete PID update with output clamped to [0, 1]. Anti-windup is
/// conditional integration: the integral freezes whenever the raw output
/// saturates, and is bounded so ki*integral stays within [-1, 1].
std::pair<ControlState, PidState> pid_step(const PidConfig& cfg, PidState state,
                                           double setpoint_c, double measured_c, double dt_s);

/// The incremental predictive baseline: +0.05 below the setpoint, -0.05 above
/// setpoint + band, hold in between; always clamped to [0, 1].
ControlState rc2_step(ControlState current, double measured_c, double setpoint_c,
                      double band_c);

/// True iff any temperature falls strictly outside its closed comfort band.
bool comfort_violated(std::span<const double> temps_c, std::span<const double> setpoints_c,
                      double band_c);

/// Schedule-driven overload; seconds_of_day must align with temps.
bool comfort_violated(std::span<const double> temps_c,
                      std::span<const double> seconds_of_day, const ComfortSchedule& schedule);

} // namespace dfclab::control
