#include "dfclab/weather_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "dfclab/errors.hpp"
#include "dfclab/timeutil.hpp"

namespace dfclab::harness {

using forecast::WeatherRecord;
using forecast::WeatherSeries;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& text, const char* column, long line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw CsvError(std::string("cannot parse ") + column + " value '" + text + "'", line);
    }
}

} // namespace

WeatherSeries load_weather_csv(const std::filesystem::path& path, double target_dt_s) {
    std::ifstream in(path);
    if (!in) throw ValidationError("weather csv: cannot open: " + path.string());

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw CsvError("weather csv: empty file", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> required = {"timestamp", "temp", "dew",
                                               "hum",       "pres", "winds"};
    const std::vector<std::string> header = split_csv_line(line);
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (i >= header.size() || header[i] != required[i])
            throw CsvError("weather csv: missing or misplaced column '" + required[i] + "'",
                           line_no);
    }
    bool has_solar = false;
    if (header.size() == required.size() + 1) {
        if (header.back() != "solar")
            throw CsvError("weather csv: unexpected trailing column '" + header.back() + "'",
                           line_no);
        has_solar = true;
    } else if (header.size() != required.size()) {
        throw CsvError("weather csv: expected 6 or 7 columns, got " +
                           std::to_string(header.size()),
                       line_no);
    }

    std::vector<WeatherRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw CsvError("weather csv: expected " + std::to_string(header.size()) +
                               " cells, got " + std::to_string(cells.size()),
                           line_no);
        WeatherRecord r;
        try {
            r.timestamp = timeutil::parse_iso8601_utc(cells[0]);
        } catch (const ValidationError& e) {
            throw CsvError(e.what(), line_no);
        }
        r.temp = parse_double(cells[1], "temp", line_no);
        r.dew = parse_double(cells[2], "dew", line_no);
        r.hum = parse_double(cells[3], "hum", line_no);
        r.pres = parse_double(cells[4], "pres", line_no);
        r.winds = parse_double(cells[5], "winds", line_no);
        if (has_solar) r.solar = parse_double(cells[6], "solar", line_no);
        try {
            r.validate();
        } catch (const ValidationError& e) {
            throw CsvError(e.what(), line_no);
        }
        if (!records.empty() && r.timestamp <= records.back().timestamp)
            throw CsvError("weather csv: timestamps not strictly increasing", line_no);
        records.push_back(r);
    }
    if (records.empty()) throw CsvError("weather csv: no data rows", line_no);

    WeatherSeries series = WeatherSeries::from_records(std::move(records));
    if (target_dt_s > 0.0 && series.size() >= 2 && series.interval_s() != target_dt_s)
        return resample_linear(series, target_dt_s);
    return series;
}

void save_weather_csv(const WeatherSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("weather csv: cannot open for writing: " + path.string());
    out << "timestamp,temp,dew,hum,pres,winds,solar\n";
    char buf[160];
    for (const WeatherRecord& r : series.records()) {
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n",
                      timeutil::format_iso8601_utc(r.timestamp).c_str(), r.temp, r.dew, r.hum,
                      r.pres, r.winds, r.solar);
        out << buf;
    }
}

WeatherSeries resample_linear(const WeatherSeries& series, double target_dt_s) {
    if (series.size() < 2) throw ValidationError("resample: need at least two records");
    if (target_dt_s <= 0) throw ValidationError("resample: target interval must be > 0");

    const std::int64_t dt = static_cast<std::int64_t>(target_dt_s);
    const std::int64_t t0 = series[0].timestamp;
    const std::int64_t t_end = series[series.size() - 1].timestamp;

    std::vector<WeatherRecord> out;
    std::size_t hi = 1;
    for (std::int64_t t = t0; t <= t_end; t += dt) {
        while (series[hi].timestamp < t && hi + 1 < series.size()) ++hi;
        const WeatherRecord& a = series[hi - 1];
        const WeatherRecord& b = series[hi];
        const double w = static_cast<double>(t - a.timestamp) /
                         static_cast<double>(b.timestamp - a.timestamp);
        const auto lerp = [w](double x, double y) { return x + w * (y - x); };
        WeatherRecord r;
        r.timestamp = t;
        r.temp = lerp(a.temp, b.temp);
        r.dew = lerp(a.dew, b.dew);
        r.hum = lerp(a.hum, b.hum);
        r.pres = lerp(a.pres, b.pres);
        r.winds = lerp(a.winds, b.winds);
        r.solar = lerp(a.solar, b.solar);
        out.push_back(r);
    }
    return WeatherSeries::from_records(std::move(out));
}

void SyntheticWeatherConfig::validate() const {
    if (days < 1) throw ValidationError("synthetic weather: days must be >= 1");
    if (dt_s <= 0) throw ValidationError("synthetic weather: dt must be > 0");
    if (start_day_of_year < 1 || start_day_of_year > 365)
        throw ValidationError("synthetic weather: start_day_of_year must be in [1, 365]");
    if (noise_phi < 0 || noise_phi >= 1)
        throw ValidationError("synthetic weather: noise_phi must be in [0, 1)");
    if (noise_sigma_c < 0) throw ValidationError("synthetic weather: noise sigma must be >= 0");
}

namespace {

// Portable gaussian: Box-Muller over explicit 53-bit uniforms, so a seed
// reproduces bit-identically across standard libraries.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform() {
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct Ar1 {
    double phi;
    double sigma;
    double state = 0.0;
    double next(GaussianSource& g) {
        state = phi * state + sigma * g.next();
        return state;
    }
};

} // namespace

WeatherSeries generate_synthetic_weather(const SyntheticWeatherConfig& cfg) {
    cfg.validate();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    const std::int64_t start_ts =
        timeutil::utc_from_civil(cfg.start_year, 1, 1) +
        static_cast<std::int64_t>(cfg.start_day_of_year - 1) * 86400;
    const std::int64_t dt = static_cast<std::int64_t>(cfg.dt_s);
    const std::size_t n =
        static_cast<std::size_t>(cfg.days * 86400.0 / cfg.dt_s);

    GaussianSource gauss(cfg.seed);
    Ar1 temp_noise{cfg.noise_phi, cfg.noise_sigma_c};
    Ar1 spread_noise{0.95, 0.05};
    Ar1 pres_noise{0.97, 0.4};
    Ar1 wind_noise{0.9, 0.3};
    Ar1 cloud_noise{0.95, 0.05};

    std::vector<WeatherRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t ts = start_ts + static_cast<std::int64_t>(i) * dt;
        const double doy = timeutil::day_of_year(ts) +
                           timeutil::seconds_of_day(ts) / 86400.0;
        const double hour = timeutil::seconds_of_day(ts) / 3600.0;

        // Warmest mid-July (day ~196), coldest mid-January; diurnal peak at 14:00.
        const double annual = cfg.annual_amplitude_c * std::cos(two_pi * (doy - 196.0) / 365.25);
        const double diurnal = cfg.diurnal_amplitude_c * std::sin(two_pi * (hour - 8.0) / 24.0);
        const double temp = cfg.annual_mean_c + annual + diurnal + temp_noise.next(gauss);

        const double spread = std::max(0.4, 2.5 + spread_noise.next(gauss));
        const double dew = temp - spread;
        const double hum = std::clamp(100.0 - 5.0 * spread, 5.0, 100.0);
        const double pres = std::clamp(1013.0 + pres_noise.next(gauss), 800.0, 1100.0);
        const double winds = std::max(0.0, 3.0 + wind_noise.next(gauss));

        // Daylight half-sine from 08:00 to 16:30 local, scaled by the season
        // and an AR cloud factor.
        const double summer_frac = 0.5 * (1.0 + std::cos(two_pi * (doy - 196.0) / 365.25));
        const double seasonal_peak =
            cfg.solar_peak_w_m2 *
            (cfg.solar_winter_floor + (1.0 - cfg.solar_winter_floor) * summer_frac);
        const double day_start = 8.0, day_end = 16.5;
        double solar = 0.0;
        if (hour > day_start && hour < day_end) {
            const double phase = (hour - day_start) / (day_end - day_start);
            const double cloud = std::clamp(0.8 + cloud_noise.next(gauss), 0.25, 1.0);
            solar = seasonal_peak * std::sin(std::numbers::pi * phase) * cloud;
        }

        records.push_back(WeatherRecord{ts, temp, dew, hum, pres, winds, std::max(0.0, solar)});
    }
    return WeatherSeries::from_records(std::move(records));
}

WeatherSeries generate_synthetic_weather(std::uint64_t seed, int days, double dt_s) {
    SyntheticWeatherConfig cfg;
    cfg.seed = seed;
    cfg.days = days;
    cfg.dt_s = dt_s;
    return generate_synthetic_weather(cfg);
}

} // namespace dfclab::harness
