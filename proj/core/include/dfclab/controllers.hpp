#pragma once

#include <deque>
#include <memory>

#include "dfclab/control.hpp"
#include "dfclab/dfc.hpp"
#include "dfclab/forecast.hpp"
#include "dfclab/thermal.hpp"

namespace dfclab::control {

/// What any strategy sees at one control step.
struct Observation {
    thermal::ThermalState state;
    double measured_c = 0.0; ///< zone air temperature
    double setpoint_c = 0.0; ///< scheduled comfort target right now
    forecast::WeatherRecord weather;

    double seconds_of_day() const { return state.seconds_of_day(); }
};

/// The shared stepwise contract: observation in, compressor speed out.
class Controller {
public:
    virtual ~Controller() = default;
    virtual ControlState step(const Observation& obs) = 0;
};

class PidController final : public Controller {
public:
    PidController(PidConfig cfg, double dt_s) : cfg_(cfg), dt_s_(dt_s) { cfg_.validate(); }

    ControlState step(const Observation& obs) override {
        auto [out, next] = pid_step(cfg_, state_, obs.setpoint_c, obs.measured_c, dt_s_);
        state_ = next;
        return out;
    }

    const PidState& state() const { return state_; }

private:
    PidConfig cfg_;
    double dt_s_;
    PidState state_;
};

class Rc2Controller final : public Controller {
public:
    explicit Rc2Controller(const ComfortSchedule& schedule) : schedule_(schedule) {}

    ControlState step(const Observation& obs) override {
        current_ = rc2_step(current_, obs.measured_c, obs.setpoint_c, schedule_.band_c);
        return current_;
    }

    ControlState current() const { return current_; }

private:
    ComfortSchedule schedule_;
    ControlState current_{0.0};
};

/// Receding-horizon execution of dfc_plan: forecast H steps ahead with the
/// weather model, re-plan, apply the head, slide the lag buffers. Throws
/// WarmUpError until lag_count observations have been ingested; the harness
/// seeds those steps with the RC2 rule via note_applied().
class DfcController final : public Controller {
public:
    DfcController(PlantModel plant, ComfortSchedule schedule, DfcConfig cfg,
                  const forecast::WeatherModel* forecaster, double dt_s);

    /// Ingests the observation, then plans; WarmUpError while buffers are short.
    ControlState step(const Observation& obs) override;

    /// Record a control applied by someone else (warm-up seeding).
    void note_applied(ControlState applied);

    bool ready() const {
        return static_cast<int>(weather_buf_.size()) >= cfg_.lag_count;
    }
    const PlanResult& last_plan() const { return last_plan_; }

private:
    void ingest(const Observation& obs);

    PlantModel plant_;
    ComfortSchedule schedule_;
    DfcConfig cfg_;
    const forecast::WeatherModel* forecaster_;
    double dt_s_;

    std::deque<forecast::WeatherRecord> weather_buf_;
    std::deque<double> indoor_buf_c_;
    std::deque<double> n_buf_;
    double current_n_ = 0.0;
    PlanResult last_plan_;
};

} // namespace dfclab::control
