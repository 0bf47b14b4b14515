#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dfclab/scenario.hpp"

namespace dfclab::harness {

/// One control step: the state observed at the step's start, the action
/// applied, and the powers drawn during the step.
struct TraceRow {
    std::int64_t timestamp = 0;
    double hours = 0.0; ///< since evaluation start
    double t_air_c = 0.0;
    double n_set = 0.0;
    double p_el_w = 0.0;
    double q_heat_w = 0.0;
    double cop = 0.0;
    double outdoor_c = 0.0;
    double solar_w_m2 = 0.0;
    double setpoint_c = 0.0;
    bool occupied = false;
};

struct ExperimentResult {
    std::string strategy;
    std::uint64_t scenario_fingerprint = 0;
    int duration_days = 0;
    double dt_s = 0.0;
    double floor_area_m2 = 0.0;

    double energy_kwh_per_day_m2 = 0.0;
    double violation_fraction_occupied = 0.0;
    double violation_fraction_night = 0.0;
    double mean_cop = 0.0; ///< energy-weighted: total heat / total electricity
    double electrical_energy_j = 0.0;

    std::vector<TraceRow> trace;

    std::string to_json() const; ///< metrics + full trace, deterministic dump
    void save(const std::filesystem::path& dir) const; ///< result.json + trace.csv
    static void write_trace_csv(const std::vector<TraceRow>& trace,
                                const std::filesystem::path& path);
};

/// Run the closed loop (controller -> simulator -> observation) for the
/// scenario's full duration. The state starts at the night setpoint; DFC lag
/// buffers warm up under the RC2 rule for the first lag steps.
ExperimentResult run_experiment(const Scenario& scenario, Strategy strategy);

struct ComparisonRow {
    std::string strategy;
    double energy_kwh_per_day_m2 = 0.0;
    double saving_pct = 0.0; ///< vs the first strategy
    double violation_fraction_occupied = 0.0;
    double mean_cop = 0.0;
};

struct Comparison {
    std::vector<ComparisonRow> rows;

    std::string format_table() const;
    std::string to_json() const;
};

/// Summary across >= 2 results of the identical scenario core; refuses
/// results whose fingerprints differ.
Comparison compare(std::span<const ExperimentResult> results);

/// Percent saving of `other` vs `baseline` as reported in comparison tables.
double percent_saving(double baseline, double other);

} // namespace dfclab::harness
