#include "dfclab/control.hpp"

#include <cmath>

namespace dfclab::control {

void ComfortSchedule::validate() const {
    if (!(band_c > 0)) throw ValidationError("comfort: band must be > 0");
    if (!std::isfinite(day_setpoint_c) || !std::isfinite(night_setpoint_c))
        throw ValidationError("comfort: setpoints must be finite");
    if (day_start_hour < 0 || day_start_hour >= day_end_hour || day_end_hour > 24)
        throw ValidationError("comfort: day window must satisfy 0 <= start < end <= 24");
}

void PidConfig::validate() const {
    if (kp < 0 || ki < 0 || kd < 0) throw ValidationError("pid: gains must be >= 0");
}

std::pair<ControlState, PidState> pid_step(const PidConfig& cfg, PidState state,
                                           double setpoint_c, double measured_c, double dt_s) {
    if (!(dt_s > 0)) throw ValidationError("pid_step: dt must be > 0");

    const double error = setpoint_c - measured_c;
    const double derivative = state.has_prev ? (error - state.prev_error) / dt_s : 0.0;

    double integral_candidate = state.integral + error * dt_s;
    if (cfg.ki > 0)
        integral_candidate = std::clamp(integral_candidate, -1.0 / cfg.ki, 1.0 / cfg.ki);

    const double raw = cfg.kp * error + cfg.ki * integral_candidate + cfg.kd * derivative;
    const double out = clamp01(raw);

    PidState next = state;
    if (raw == out) next.integral = integral_candidate; // frozen while saturated
    next.prev_error = error;
    next.has_prev = true;
    return {ControlState{out}, next};
}

ControlState rc2_step(ControlState current, double measured_c, double setpoint_c,
                      double band_c) {
    double n = current.n_set;
    if (measured_c < setpoint_c)
        n += 0.05;
    else if (measured_c > setpoint_c + band_c)
        n -= 0.05;
    return ControlState{clamp01(n)};
}

bool comfort_violated(std::span<const double> temps_c, std::span<const double> setpoints_c,
                      double band_c) {
    if (temps_c.size() != setpoints_c.size())
        throw ValidationError("comfort_violated: length mismatch");
    for (std::size_t i = 0; i < temps_c.size(); ++i)
        if (temps_c[i] < setpoints_c[i] - band_c || temps_c[i] > setpoints_c[i] + band_c)
            return true;
    return false;
}

bool comfort_violated(std::span<const double> temps_c,
                      std::span<const double> seconds_of_day,
                      const ComfortSchedule& schedule) {
    if (temps_c.size() != seconds_of_day.size())
        throw ValidationError("comfort_violated: length mismatch");
    std::vector<double> setpoints(temps_c.size());
    for (std::size_t i = 0; i < temps_c.size(); ++i)
        setpoints[i] = schedule.setpoint_at(seconds_of_day[i]);
    return comfort_violated(temps_c, setpoints, schedule.band_c);
}

} // namespace dfclab::control
