#include "dfclab/controllers.hpp"

#include <algorithm>

namespace dfclab::control {

DfcController::DfcController(PlantModel plant, ComfortSchedule schedule, DfcConfig cfg,
                             const forecast::WeatherModel* forecaster, double dt_s)
    : plant_(std::move(plant)), schedule_(schedule), cfg_(cfg), forecaster_(forecaster),
      dt_s_(dt_s) {
    cfg_.validate();
    schedule_.validate();
    if (!forecaster_) throw ValidationError("dfc controller: forecaster required");
    if (forecaster_->spec.lag_count > cfg_.lag_count)
        throw ValidationError("dfc controller: forecaster needs more lags than the controller keeps");
}

void DfcController::ingest(const Observation& obs) {
    weather_buf_.push_back(obs.weather);
    indoor_buf_c_.push_back(obs.measured_c);
    while (static_cast<int>(weather_buf_.size()) > cfg_.lag_count) weather_buf_.pop_front();
    while (static_cast<int>(indoor_buf_c_.size()) > cfg_.lag_count) indoor_buf_c_.pop_front();
}

void DfcController::note_applied(ControlState applied) {
    current_n_ = clamp01(applied.n_set);
    n_buf_.push_back(current_n_);
    while (static_cast<int>(n_buf_.size()) > cfg_.lag_count) n_buf_.pop_front();
}

ControlState DfcController::step(const Observation& obs) {
    ingest(obs);
    if (!ready())
        throw WarmUpError(static_cast<int>(weather_buf_.size()), cfg_.lag_count);

    // One-step model rolled out recursively over the horizon; columns the
    // model does not predict persist at their latest observed values.
    const std::vector<forecast::WeatherRecord> window(weather_buf_.begin(),
                                                      weather_buf_.end());
    const std::vector<forecast::WeatherRecord> future = forecast::forecast_rollout_records(
        *forecaster_,
        std::span<const forecast::WeatherRecord>(window).last(
            static_cast<std::size_t>(forecaster_->spec.lag_count)),
        cfg_.horizon);

    PlannerContext ctx;
    ctx.current_n = current_n_;
    ctx.indoor_lags_c.assign(indoor_buf_c_.begin(), indoor_buf_c_.end());
    ctx.n_lags.assign(n_buf_.begin(), n_buf_.end());

    last_plan_ = dfc_plan(plant_, schedule_, obs.state, future, ctx, dt_s_, cfg_);
    const ControlState head = last_plan_.plan.front();
    note_applied(head);
    return head;
}

} // namespace dfclab::control
