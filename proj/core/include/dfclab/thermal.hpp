#pragma once

#include <span>
#include <vector>

#include "dfclab/errors.hpp"
#include "dfclab/weather.hpp"

namespace dfclab::thermal {

constexpr double kelvin_offset = 273.15;
inline double kelvin_from_celsius(double c) { return c + kelvin_offset; }
inline double celsius_from_kelvin(double k) { return k - kelvin_offset; }

/// Air density * specific heat, J/(m3 K), used for ventilation and the
/// default zone-air capacity (3 m ceiling assumed).
constexpr double air_volumetric_heat = 1.2 * 1005.0;
constexpr double ceiling_height_m = 3.0;

/// Lumped parameters of the four-element office zone. Defaults are the
/// published passive-house values; the capacities the source table omits
/// default to the same order of magnitude and can be overridden per scenario.
struct ThermalParams {
    double r_ext = 1.41e-4;        ///< exterior walls, K/W
    double c_ext = 4.93e8;         ///< exterior walls, J/K
    double r_floor = 1e-3;         ///< floor plate, K/W
    double c_floor = 0.5 * 4.93e8; ///< floor plate, J/K
    double r_roof = 1e-3;          ///< roof, K/W
    double c_roof = 0.5 * 4.93e8;  ///< roof, J/K
    double r_int = 1.3e-4;         ///< interior walls, K/W
    double c_int = 4.93e8;         ///< interior walls, J/K

    double floor_area = 1675.0;   ///< m2
    double c_air = air_volumetric_heat * 1675.0 * ceiling_height_m; ///< zone air, J/K
    double ventilation_ach = 0.1; ///< air changes per hour
    double solar_aperture = 0.05 * 1675.0; ///< effective collecting area, m2
    double ground_temp_k = 283.15;         ///< constant floor-side boundary

    /// Ventilation conductance to ambient, W/K: air changes swap the zone air
    /// volume, independent of whatever extra mass is lumped into c_air.
    double ventilation_conductance() const {
        return ventilation_ach * air_volumetric_heat * floor_area * ceiling_height_m / 3600.0;
    }

    void validate() const;
};

/// Variable-speed heat pump with a Carnot-efficiency COP model.
struct HeatPumpParams {
    double q_nominal = 18500.0; ///< thermal heating power at n_set = 1, W
    double eta_carnot = 0.4;    ///< fraction of Carnot COP actually achieved
    double cop_max = 6.0;
    double cop_min = 1.0;
    double sink_offset_k = 10.0; ///< supply sink = zone air + offset

    void validate() const;
};

/// Internal gains (occupants, equipment, lighting) phased by the occupancy window.
struct GainsSchedule {
    double occupied_w_m2 = 10.0;
    double unoccupied_w_m2 = 2.0;
    int start_hour = 7; ///< local clock, inclusive
    int end_hour = 18;  ///< local clock, exclusive

    bool occupied_at(double seconds_of_day) const {
        const double h = seconds_of_day / 3600.0;
        return h >= start_hour && h < end_hour;
    }
    double power_w(double seconds_of_day, double floor_area) const {
        return (occupied_at(seconds_of_day) ? occupied_w_m2 : unoccupied_w_m2) * floor_area;
    }

    void validate() const;
};

/// Node temperatures in kelvin plus seconds since scenario start (scenario
/// time zero is local midnight).
struct ThermalState {
    double t_air = 292.15;
    double t_ext_wall = 292.15;
    double t_int_wall = 292.15;
    double t_floor = 292.15;
    double t_roof = 292.15;
    double sim_time = 0.0;

    static ThermalState uniform(double t_k, double sim_time = 0.0) {
        return ThermalState{t_k, t_k, t_k, t_k, t_k, sim_time};
    }
    double seconds_of_day() const;
    bool within_sanity_bounds() const;
};

/// A step outside the [200 K, 400 K] sanity window; carries the bad state.
class SimulationFault : public RuntimeFault {
public:
    SimulationFault(const std::string& what, const ThermalState& state)
        : RuntimeFault(what), state_(state) {}
    const ThermalState& state() const { return state_; }

private:
    ThermalState state_;
};

struct StepOutput {
    ThermalState next_state;
    double p_el = 0.0;   ///< electrical power drawn over the step, W
    double q_heat = 0.0; ///< thermal power delivered over the step, W
    double cop = 0.0;
};

/// Integrated heat flows over one step, J. Accumulated inside the RK4 stages,
/// so heat + gains + solar - boundary - ventilation equals the capacity-weighted
/// temperature change to machine precision.
struct StepFlows {
    double heat_j = 0.0;
    double gains_j = 0.0;
    double solar_j = 0.0;
    double boundary_j = 0.0;    ///< losses through the exterior/roof/floor boundaries
    double ventilation_j = 0.0; ///< losses through air exchange

    double net_j() const { return heat_j + gains_j + solar_j - boundary_j - ventilation_j; }
    StepFlows& operator+=(const StepFlows& o);
};

/// Stored heat relative to 0 K, J -- for energy-balance bookkeeping.
double stored_heat_j(const ThermalParams& p, const ThermalState& s);

/// Carnot-limited COP, clamped to [cop_min, cop_max]. A sink at or below the
/// source makes the Carnot expression singular or negative; that case clamps
/// to cop_max.
double cop(double t_source_k, double t_sink_k, const HeatPumpParams& hp);

/// Advance the 5-node network by dt seconds with fixed-step RK4 (substeps
/// capped at 60 s). Weather is held constant across the step.
StepOutput step(const ThermalParams& params, const HeatPumpParams& hp,
                const ThermalState& state, const forecast::WeatherRecord& outdoor,
                const GainsSchedule& gains, double n_set, double dt_s,
                StepFlows* flows = nullptr);

/// Heat input that would hold the air node at t_target over the next dt:
/// the quasi-static air-node balance with wall temperatures frozen, plus the
/// capacitive term for moving the air itself. Gains and solar are credited.
double required_heat_input(const ThermalParams& params, const ThermalState& state,
                           const forecast::WeatherRecord& outdoor,
                           const GainsSchedule& gains, double t_target_k, double dt_s);

struct Trace {
    std::vector<StepOutput> steps;
    double electrical_energy_j = 0.0;
};

/// Pure rollout over equally long weather/control sequences.
Trace simulate_horizon(const ThermalParams& params, const HeatPumpParams& hp,
                       const ThermalState& state0,
                       std::span<const forecast::WeatherRecord> weather,
                       std::span<const double> n_set, const GainsSchedule& gains,
                       double dt_s);

} // namespace dfclab::thermal
