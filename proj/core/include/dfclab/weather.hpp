#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dfclab::forecast {

/// One timestamped sample of exogenous conditions. Units follow the usual
/// meteorological conventions; temperatures are Celsius at this boundary.
struct WeatherRecord {
    std::int64_t timestamp = 0; ///< UTC seconds since the Unix epoch
    double temp = 0.0;          ///< air temperature, degC
    double dew = 0.0;           ///< dew point, degC
    double hum = 50.0;          ///< relative humidity, %
    double pres = 1013.0;       ///< atmospheric pressure, hPa
    double winds = 0.0;         ///< wind speed, m/s
    double solar = 0.0;         ///< global irradiance, W/m2 (optional column, default 0)

    void validate() const; // throws ValidationError on an implausible record
};

/// Uniformly spaced, strictly increasing sequence of WeatherRecord.
class WeatherSeries {
public:
    WeatherSeries() = default;

    /// Validates spacing: strictly increasing timestamps with one constant interval.
    static WeatherSeries from_records(std::vector<WeatherRecord> records);

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    double interval_s() const { return interval_s_; }

    const WeatherRecord& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<WeatherRecord>& records() const { return records_; }
    std::span<const WeatherRecord> span() const { return records_; }

    /// Sub-series [first, first+count); spacing is inherited.
    WeatherSeries slice(std::size_t first, std::size_t count) const;

private:
    std::vector<WeatherRecord> records_;
    double interval_s_ = 0.0;
};

} // namespace dfclab::forecast
