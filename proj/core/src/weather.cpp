#include "dfclab/weather.hpp"

#include <cmath>
#include <string>

#include "dfclab/errors.hpp"

namespace dfclab::forecast {

void WeatherRecord::validate() const {
    const auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(temp) || bad(dew) || bad(hum) || bad(pres) || bad(winds) || bad(solar))
        throw ValidationError("weather record: non-finite value");
    if (hum < 0.0 || hum > 100.0)
        throw ValidationError("weather record: humidity " + std::to_string(hum) +
                              " outside [0, 100]");
    if (pres < 800.0 || pres > 1100.0)
        throw ValidationError("weather record: pressure " + std::to_string(pres) +
                              " outside [800, 1100] hPa");
    if (winds < 0.0) throw ValidationError("weather record: negative wind speed");
    if (dew > temp + 0.5) // half-degree slack for measurement noise
        throw ValidationError("weather record: dew point exceeds air temperature");
    if (solar < 0.0) throw ValidationError("weather record: negative irradiance");
}

WeatherSeries WeatherSeries::from_records(std::vector<WeatherRecord> records) {
    if (records.empty()) throw ValidationError("weather series: empty");
    WeatherSeries s;
    if (records.size() >= 2) {
        const std::int64_t dt = records[1].timestamp - records[0].timestamp;
        if (dt <= 0) throw ValidationError("weather series: timestamps not increasing");
        for (std::size_t i = 1; i < records.size(); ++i) {
            const std::int64_t step = records[i].timestamp - records[i - 1].timestamp;
            if (step != dt)
                throw ValidationError(
                    "weather series: non-uniform spacing at index " + std::to_string(i) +
                    " (expected " + std::to_string(dt) + " s, got " + std::to_string(step) + " s)");
        }
        s.interval_s_ = static_cast<double>(dt);
    }
    for (const auto& r : records) r.validate();
    s.records_ = std::move(records);
    return s;
}

WeatherSeries WeatherSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > records_.size())
        throw ValidationError("weather series: slice out of range");
    WeatherSeries s;
    s.records_.assign(records_.begin() + first, records_.begin() + first + count);
    s.interval_s_ = interval_s_;
    return s;
}

} // namespace dfclab::forecast
