#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dfclab/control.hpp"
#include "dfclab/dfc.hpp"
#include "dfclab/forecast.hpp"
#include "dfclab/thermal.hpp"
#include "dfclab/weather_io.hpp"

namespace dfclab::harness {

enum class Strategy { rc1, rc2, dfc };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Exactly one weather source: a CSV path or the synthetic generator.
struct WeatherSource {
    std::optional<std::string> csv_path;
    std::optional<SyntheticWeatherConfig> synthetic = SyntheticWeatherConfig{};

    void validate() const;
};

/// A full experiment description. Everything outside `strategies` is the
/// scenario core: two results are comparable only when their cores match.
struct Scenario {
    std::string name = "scenario";
    double dt_s = 600.0;
    int duration_days = 30;
    int history_days = 60; ///< forecaster training span preceding the evaluation window

    thermal::ThermalParams thermal;
    thermal::HeatPumpParams heat_pump;
    thermal::GainsSchedule gains;
    control::ComfortSchedule comfort;
    WeatherSource weather;

    forecast::WindowSpec forecaster_spec;
    gbdt::TrainConfig forecaster_train;

    control::PidConfig rc1;
    control::DfcConfig dfc;

    void validate() const;

    std::string to_json() const;
    static Scenario from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static Scenario load(const std::filesystem::path& path);

    /// Canonical dump of the strategy-independent core.
    std::string core_json() const;
    /// FNV-1a over core_json(); stamped into every result for fair-comparison checks.
    std::uint64_t fingerprint() const;
};

} // namespace dfclab::harness
