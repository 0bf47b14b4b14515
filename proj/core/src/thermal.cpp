#include "dfclab/thermal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace dfclab::thermal {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require(bool ok, const char* msg) {
    if (!ok) throw ValidationError(msg);
}

} // namespace

void ThermalParams::validate() const {
    require(finite(r_ext) && r_ext > 0, "thermal: r_ext must be > 0");
    require(finite(c_ext) && c_ext > 0, "thermal: c_ext must be > 0");
    require(finite(r_floor) && r_floor > 0, "thermal: r_floor must be > 0");
    require(finite(c_floor) && c_floor > 0, "thermal: c_floor must be > 0");
    require(finite(r_roof) && r_roof > 0, "thermal: r_roof must be > 0");
    require(finite(c_roof) && c_roof > 0, "thermal: c_roof must be > 0");
    require(finite(r_int) && r_int > 0, "thermal: r_int must be > 0");
    require(finite(c_int) && c_int > 0, "thermal: c_int must be > 0");
    require(finite(c_air) && c_air > 0, "thermal: c_air must be > 0");
    require(finite(floor_area) && floor_area > 0, "thermal: floor_area must be > 0");
    require(finite(ventilation_ach) && ventilation_ach >= 0, "thermal: ventilation_ach must be >= 0");
    require(finite(solar_aperture) && solar_aperture >= 0, "thermal: solar_aperture must be >= 0");
    require(finite(ground_temp_k) && ground_temp_k > 0, "thermal: ground_temp_k must be > 0");
}

void HeatPumpParams::validate() const {
    require(finite(q_nominal) && q_nominal > 0, "heat pump: q_nominal must be > 0");
    require(finite(eta_carnot) && eta_carnot > 0 && eta_carnot <= 1,
            "heat pump: eta_carnot must be in (0, 1]");
    require(finite(cop_min) && cop_min >= 1, "heat pump: cop_min must be >= 1");
    require(finite(cop_max) && cop_max > cop_min, "heat pump: cop_max must exceed cop_min");
    require(finite(sink_offset_k) && sink_offset_k >= 0, "heat pump: sink_offset_k must be >= 0");
}

void GainsSchedule::validate() const {
    require(finite(occupied_w_m2) && occupied_w_m2 >= 0, "gains: occupied_w_m2 must be >= 0");
    require(finite(unoccupied_w_m2) && unoccupied_w_m2 >= 0, "gains: unoccupied_w_m2 must be >= 0");
    require(start_hour >= 0 && start_hour < 24 && end_hour > start_hour && end_hour <= 24,
            "gains: occupancy window must satisfy 0 <= start < end <= 24");
}

double ThermalState::seconds_of_day() const {
    double s = std::fmod(sim_time, 86400.0);
    if (s < 0) s += 86400.0;
    return s;
}

bool ThermalState::within_sanity_bounds() const {
    const auto ok = [](double t) { return std::isfinite(t) && t >= 200.0 && t <= 400.0; };
    return ok(t_air) && ok(t_ext_wall) && ok(t_int_wall) && ok(t_floor) && ok(t_roof);
}

StepFlows& StepFlows::operator+=(const StepFlows& o) {
    heat_j += o.heat_j;
    gains_j += o.gains_j;
    solar_j += o.solar_j;
    boundary_j += o.boundary_j;
    ventilation_j += o.ventilation_j;
    return *this;
}

double stored_heat_j(const ThermalParams& p, const ThermalState& s) {
    return p.c_air * s.t_air + p.c_ext * s.t_ext_wall + p.c_int * s.t_int_wall +
           p.c_floor * s.t_floor + p.c_roof * s.t_roof;
}

double cop(double t_source_k, double t_sink_k, const HeatPumpParams& hp) {
    if (!finite(t_source_k) || !finite(t_sink_k))
        throw ValidationError("cop: non-finite temperature");
    if (t_sink_k <= 0) throw ValidationError("cop: sink temperature must be > 0 K");
    if (t_sink_k <= t_source_k) return hp.cop_max;
    const double raw = hp.eta_carnot * t_sink_k / (t_sink_k - t_source_k);
    return std::clamp(raw, hp.cop_min, hp.cop_max);
}

namespace {

// State vector layout: air, ext wall, int wall, floor, roof, then three
// integral accumulators (injected heat+gains+solar are tracked separately
// in the derivative so the flow bookkeeping shares the RK4 quadrature).
constexpr int n_temp = 5;
constexpr int n_acc = 5; // heat, gains, solar, boundary loss, ventilation loss
using Vec = std::array<double, n_temp + n_acc>;

struct Conductances {
    double air_ext, air_int, air_floor, air_roof; // air <-> element
    double ext_amb, floor_gnd, roof_amb;          // element <-> boundary
    double vent;                                  // air <-> ambient
};

// Each element's published resistance is split equally between the air side
// and its boundary side; the interior wall has no boundary side and keeps
// the full resistance toward the air node.
Conductances conductances(const ThermalParams& p) {
    Conductances g{};
    g.air_ext = 2.0 / p.r_ext;
    g.ext_amb = 2.0 / p.r_ext;
    g.air_floor = 2.0 / p.r_floor;
    g.floor_gnd = 2.0 / p.r_floor;
    g.air_roof = 2.0 / p.r_roof;
    g.roof_amb = 2.0 / p.r_roof;
    g.air_int = 1.0 / p.r_int;
    g.vent = p.ventilation_conductance();
    return g;
}

struct RhsContext {
    const ThermalParams& p;
    const Conductances& g;
    const GainsSchedule& gains;
    double t_out_k;
    double solar_w;
    double q_hp_w;
    double sim_time0;
};

Vec rhs(const RhsContext& c, double t_rel, const Vec& y) {
    const double t_air = y[0], t_ext = y[1], t_int = y[2], t_flo = y[3], t_roo = y[4];

    const double seconds_of_day = [&] {
        double s = std::fmod(c.sim_time0 + t_rel, 86400.0);
        return s < 0 ? s + 86400.0 : s;
    }();
    const double q_gains = c.gains.power_w(seconds_of_day, c.p.floor_area);

    // Injection stops at the sanity ceiling so a runaway control cannot push
    // the air node past 400 K.
    const double q_hp = (t_air < 400.0) ? c.q_hp_w : 0.0;

    const double f_ext = c.g.air_ext * (t_ext - t_air);
    const double f_int = c.g.air_int * (t_int - t_air);
    const double f_flo = c.g.air_floor * (t_flo - t_air);
    const double f_roo = c.g.air_roof * (t_roo - t_air);
    const double f_vent = c.g.vent * (c.t_out_k - t_air);

    Vec dy{};
    dy[0] = (q_hp + q_gains + c.solar_w + f_ext + f_int + f_flo + f_roo + f_vent) / c.p.c_air;
    dy[1] = (-f_ext + c.g.ext_amb * (c.t_out_k - t_ext)) / c.p.c_ext;
    dy[2] = -f_int / c.p.c_int;
    dy[3] = (-f_flo + c.g.floor_gnd * (c.p.ground_temp_k - t_flo)) / c.p.c_floor;
    dy[4] = (-f_roo + c.g.roof_amb * (c.t_out_k - t_roo)) / c.p.c_roof;

    dy[5] = q_hp;
    dy[6] = q_gains;
    dy[7] = c.solar_w;
    dy[8] = c.g.ext_amb * (t_ext - c.t_out_k) + c.g.floor_gnd * (t_flo - c.p.ground_temp_k) +
            c.g.roof_amb * (t_roo - c.t_out_k);
    dy[9] = -f_vent;
    return dy;
}

Vec rk4_step(const RhsContext& c, double t_rel, const Vec& y, double h) {
    const Vec k1 = rhs(c, t_rel, y);
    Vec y2;
    for (int i = 0; i < n_temp + n_acc; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    const Vec k2 = rhs(c, t_rel + 0.5 * h, y2);
    Vec y3;
    for (int i = 0; i < n_temp + n_acc; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
    const Vec k3 = rhs(c, t_rel + 0.5 * h, y3);
    Vec y4;
    for (int i = 0; i < n_temp + n_acc; ++i) y4[i] = y[i] + h * k3[i];
    const Vec k4 = rhs(c, t_rel + h, y4);
    Vec out;
    for (int i = 0; i < n_temp + n_acc; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

} // namespace

StepOutput step(const ThermalParams& params, const HeatPumpParams& hp,
                const ThermalState& state, const forecast::WeatherRecord& outdoor,
                const GainsSchedule& gains, double n_set, double dt_s, StepFlows* flows) {
    if (!finite(n_set) || n_set < 0.0 || n_set > 1.0)
        throw ValidationError("step: n_set must be in [0, 1]");
    if (!finite(dt_s) || dt_s <= 0.0) throw ValidationError("step: dt must be > 0");
    if (!state.within_sanity_bounds())
        throw SimulationFault("step: input state outside sanity bounds", state);

    const Conductances g = conductances(params);
    const double t_out_k = kelvin_from_celsius(outdoor.temp);
    RhsContext ctx{params, g, gains, t_out_k, outdoor.solar * params.solar_aperture,
                   n_set * hp.q_nominal, state.sim_time};

    Vec y{state.t_air, state.t_ext_wall, state.t_int_wall, state.t_floor, state.t_roof,
          0, 0, 0, 0, 0};

    const int substeps = std::max(1, static_cast<int>(std::ceil(dt_s / 60.0)));
    const double h = dt_s / substeps;
    for (int k = 0; k < substeps; ++k) y = rk4_step(ctx, k * h, y, h);

    StepOutput out;
    out.next_state =
        ThermalState{y[0], y[1], y[2], y[3], y[4], state.sim_time + dt_s};
    if (!out.next_state.within_sanity_bounds())
        throw SimulationFault("step: state left the [200 K, 400 K] sanity window",
                              out.next_state);

    out.cop = cop(t_out_k, state.t_air + hp.sink_offset_k, hp);
    out.q_heat = y[5] / dt_s; // average injected thermal power; equals n_set*q_nominal unless capped
    out.p_el = out.q_heat / out.cop;

    if (flows) {
        flows->heat_j = y[5];
        flows->gains_j = y[6];
        flows->solar_j = y[7];
        flows->boundary_j = y[8];
        flows->ventilation_j = y[9];
    }
    return out;
}

double required_heat_input(const ThermalParams& params, const ThermalState& state,
                           const forecast::WeatherRecord& outdoor,
                           const GainsSchedule& gains, double t_target_k, double dt_s) {
    if (!finite(t_target_k) || !(dt_s > 0))
        throw ValidationError("required_heat_input: bad target or dt");
    const Conductances g = conductances(params);
    const double t_out_k = kelvin_from_celsius(outdoor.temp);

    const double losses = g.air_ext * (t_target_k - state.t_ext_wall) +
                          g.air_int * (t_target_k - state.t_int_wall) +
                          g.air_floor * (t_target_k - state.t_floor) +
                          g.air_roof * (t_target_k - state.t_roof) +
                          g.vent * (t_target_k - t_out_k);
    const double move = params.c_air * (t_target_k - state.t_air) / dt_s;
    const double credits = gains.power_w(state.seconds_of_day(), params.floor_area) +
                           outdoor.solar * params.solar_aperture;
    return losses + move - credits;
}

Trace simulate_horizon(const ThermalParams& params, const HeatPumpParams& hp,
                       const ThermalState& state0,
                       std::span<const forecast::WeatherRecord> weather,
                       std::span<const double> n_set, const GainsSchedule& gains,
                       double dt_s) {
    if (weather.size() != n_set.size())
        throw ValidationError("simulate_horizon: weather and control lengths differ");
    if (weather.empty()) throw ValidationError("simulate_horizon: empty horizon");

    Trace trace;
    trace.steps.reserve(weather.size());
    ThermalState s = state0;
    for (std::size_t i = 0; i < weather.size(); ++i) {
        StepOutput o = step(params, hp, s, weather[i], gains, n_set[i], dt_s);
        trace.electrical_energy_j += o.p_el * dt_s;
        s = o.next_state;
        trace.steps.push_back(std::move(o));
    }
    return trace;
}

} // namespace dfclab::thermal
