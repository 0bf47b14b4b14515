#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "dfclab/experiment.hpp"
#include "dfclab/scenario.hpp"
#include "dfclab/timeutil.hpp"
#include "dfclab/weather_io.hpp"
#include "doctest.h"

using namespace dfclab;
using namespace dfclab::harness;

namespace {

std::filesystem::path write_temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

// A quick scenario: small zone, short run, low forecaster budget.
Scenario quick_scenario(int duration_days = 1) {
    Scenario s;
    s.duration_days = duration_days;
    s.history_days = 31;
    s.thermal.floor_area = 100.0;
    s.thermal.c_air = thermal::air_volumetric_heat * 100.0 * 3.0;
    s.thermal.r_ext = 2e-3;
    s.thermal.c_ext = 5e7;
    s.thermal.r_floor = 8e-3;
    s.thermal.c_floor = 2e7;
    s.thermal.r_roof = 8e-3;
    s.thermal.c_roof = 2e7;
    s.thermal.r_int = 2e-3;
    s.thermal.c_int = 4e7;
    s.thermal.solar_aperture = 5.0;
    s.thermal.ventilation_ach = 0.3;
    s.heat_pump.q_nominal = 6000.0;
    s.gains.occupied_w_m2 = 5.0;
    s.gains.unoccupied_w_m2 = 1.0;
    SyntheticWeatherConfig w;
    w.seed = 4;
    w.annual_mean_c = 18.0;
    w.annual_amplitude_c = 3.0;
    w.diurnal_amplitude_c = 1.0;
    s.weather.synthetic = w;
    s.forecaster_train.iterations = 40;
    s.forecaster_train.tree = {15, 2};
    s.dfc.rounds = 6;
    return s;
}

} // namespace

TEST_CASE("load_weather_csv: well-formed file and validation failures") {
    SUBCASE("three rows parse") {
        const auto path = write_temp_file("dfclab_w_ok.csv",
                                          "timestamp,temp,dew,hum,pres,winds\n"
                                          "2023-01-01T00:00:00Z,5.0,3.0,80,1013,2\n"
                                          "2023-01-01T00:10:00Z,5.1,3.0,80,1013,2\n"
                                          "2023-01-01T00:20:00Z,5.2,3.0,80,1013,2\n");
        const auto series = load_weather_csv(path);
        CHECK(series.size() == 3);
        CHECK(series.interval_s() == 600.0);
        CHECK(series[1].temp == 5.1);
        std::filesystem::remove(path);
    }
    SUBCASE("missing pres column is named") {
        const auto path = write_temp_file("dfclab_w_nopres.csv",
                                          "timestamp,temp,dew,hum,winds\n"
                                          "2023-01-01T00:00:00Z,5.0,3.0,80,2\n");
        try {
            load_weather_csv(path);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(std::string(e.what()).find("pres") != std::string::npos);
            CHECK(e.line() == 1);
        }
        std::filesystem::remove(path);
    }
    SUBCASE("unparsable cell reports its line") {
        const auto path = write_temp_file("dfclab_w_bad.csv",
                                          "timestamp,temp,dew,hum,pres,winds\n"
                                          "2023-01-01T00:00:00Z,5.0,3.0,80,1013,2\n"
                                          "2023-01-01T00:10:00Z,oops,3.0,80,1013,2\n");
        try {
            load_weather_csv(path);
            FAIL("expected CsvError");
        } catch (const CsvError& e) {
            CHECK(e.line() == 3);
        }
        std::filesystem::remove(path);
    }
    SUBCASE("non-monotonic timestamps rejected") {
        const auto path = write_temp_file("dfclab_w_mono.csv",
                                          "timestamp,temp,dew,hum,pres,winds\n"
                                          "2023-01-01T00:10:00Z,5.0,3.0,80,1013,2\n"
                                          "2023-01-01T00:00:00Z,5.1,3.0,80,1013,2\n");
        CHECK_THROWS_AS(load_weather_csv(path), CsvError);
        std::filesystem::remove(path);
    }
}

TEST_CASE("load_weather_csv: hourly source resamples onto the 600 s grid") {
    std::string content = "timestamp,temp,dew,hum,pres,winds\n";
    char line[128];
    for (int h = 0; h < 4; ++h) {
        std::snprintf(line, sizeof(line), "2023-01-01T%02d:00:00Z,%d.0,1.0,80,1013,2\n", h,
                      10 + h);
        content += line;
    }
    const auto path = write_temp_file("dfclab_w_hourly.csv", content);
    const auto series = load_weather_csv(path, 600.0);
    CHECK(series.size() == 4 * 6 - 5);
    CHECK(series.interval_s() == 600.0);
    // Interior points interpolate linearly between the hourly neighbors.
    CHECK(series[1].temp == doctest::Approx(10.0 + 1.0 / 6.0));
    CHECK(series[3].temp == doctest::Approx(10.0 + 3.0 / 6.0));
    CHECK(series[6].temp == doctest::Approx(11.0));
    std::filesystem::remove(path);
}

TEST_CASE("synthetic weather: determinism, counts, seasons, physical bounds") {
    SUBCASE("same seed, same series") {
        const auto a = generate_synthetic_weather(99, 3);
        const auto b = generate_synthetic_weather(99, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].temp == b[i].temp);
            CHECK(a[i].solar == b[i].solar);
        }
    }
    SUBCASE("one day at 600 s gives 144 records") {
        CHECK(generate_synthetic_weather(1, 1).size() == 144);
    }
    SUBCASE("winter colder than summer over a year") {
        SyntheticWeatherConfig cfg;
        cfg.seed = 12;
        cfg.days = 365;
        cfg.start_day_of_year = 1;
        const auto series = generate_synthetic_weather(cfg);
        double winter = 0, summer = 0;
        int nw = 0, ns = 0;
        for (const auto& r : series.records()) {
            const int doy = timeutil::day_of_year(r.timestamp);
            if (doy <= 31) {
                winter += r.temp;
                ++nw;
            } else if (doy > 182 && doy <= 213) {
                summer += r.temp;
                ++ns;
            }
        }
        CHECK(winter / nw < summer / ns);
    }
    SUBCASE("records respect the physical invariants") {
        const auto series = generate_synthetic_weather(5, 10);
        for (const auto& r : series.records()) {
            CHECK(r.hum >= 0.0);
            CHECK(r.hum <= 100.0);
            CHECK(r.dew <= r.temp + 0.5);
            CHECK(r.winds >= 0.0);
            CHECK(r.solar >= 0.0);
        }
    }
}

TEST_CASE("scenario: JSON round trip and validation") {
    Scenario s = quick_scenario();
    const std::string text = s.to_json();
    const Scenario back = Scenario::from_json(text);
    CHECK(back.fingerprint() == s.fingerprint());
    CHECK(back.thermal.r_ext == s.thermal.r_ext);
    CHECK(back.dfc.rounds == s.dfc.rounds);

    SUBCASE("zero-duration guard") {
        Scenario bad = quick_scenario();
        bad.duration_days = 0;
        CHECK_THROWS_AS(bad.validate(), ValidationError);
    }
    SUBCASE("exactly one weather source") {
        Scenario bad = quick_scenario();
        bad.weather.csv_path = "/tmp/x.csv"; // both set now
        CHECK_THROWS_AS(bad.validate(), ValidationError);
        bad.weather.csv_path.reset();
        bad.weather.synthetic.reset();
        CHECK_THROWS_AS(bad.validate(), ValidationError);
    }
    SUBCASE("defaults reproduce the published thermal table") {
        const Scenario d = Scenario::from_json("{}");
        CHECK(d.thermal.r_ext == 1.41e-4);
        CHECK(d.thermal.c_ext == 4.93e8);
        CHECK(d.heat_pump.q_nominal == 18500.0);
        CHECK(d.comfort.day_setpoint_c == 21.0);
        CHECK(d.comfort.night_setpoint_c == 19.0);
    }
}

TEST_CASE("run_experiment: smoke run, alignment, accounting, determinism") {
    const Scenario s = quick_scenario();

    const ExperimentResult r = run_experiment(s, Strategy::rc1);
    CHECK(r.energy_kwh_per_day_m2 > 0.0);
    CHECK(r.trace.size() == 144);

    SUBCASE("every trace row's setpoint matches the schedule at its clock") {
        for (const auto& row : r.trace) {
            const double tod = timeutil::seconds_of_day(row.timestamp);
            CHECK(row.setpoint_c == s.comfort.setpoint_at(tod));
            CHECK(row.occupied == s.comfort.day_at(tod));
        }
    }
    SUBCASE("energy equals the independent trace re-summation") {
        double resummed = 0.0;
        for (const auto& row : r.trace) resummed += row.p_el_w * s.dt_s;
        CHECK(r.electrical_energy_j == doctest::Approx(resummed).epsilon(1e-9));
        const double kwh = resummed / 3.6e6 / s.duration_days / s.thermal.floor_area;
        CHECK(r.energy_kwh_per_day_m2 == doctest::Approx(kwh).epsilon(1e-12));
    }
    SUBCASE("fixed scenario and seed reproduce bit-identical results") {
        const ExperimentResult again = run_experiment(s, Strategy::rc1);
        CHECK(again.to_json() == r.to_json());
    }
    SUBCASE("rc2 and dfc run through the same harness") {
        const ExperimentResult r2 = run_experiment(s, Strategy::rc2);
        CHECK(r2.trace.size() == 144);
        const ExperimentResult r3 = run_experiment(s, Strategy::dfc);
        CHECK(r3.trace.size() == 144);
        for (const auto& row : r3.trace) {
            CHECK(row.n_set >= 0.0);
            CHECK(row.n_set <= 1.0);
        }
    }
}

TEST_CASE("compare: savings arithmetic and fairness guard") {
    ExperimentResult a;
    a.strategy = "rc1";
    a.scenario_fingerprint = 42;
    a.energy_kwh_per_day_m2 = 0.305;
    ExperimentResult b = a;
    b.strategy = "rc2";
    b.energy_kwh_per_day_m2 = 0.273;
    ExperimentResult c = a;
    c.strategy = "dfc";
    c.energy_kwh_per_day_m2 = 0.251;

    SUBCASE("identical duplicates save nothing") {
        const std::vector<ExperimentResult> rs{a, a};
        const Comparison cmp = compare(rs);
        CHECK(cmp.rows[1].saving_pct == 0.0);
    }
    SUBCASE("published energy pairs reproduce the published percentages") {
        const std::vector<ExperimentResult> rs{a, b, c};
        const Comparison cmp = compare(rs);
        CHECK(std::round(cmp.rows[1].saving_pct * 10.0) / 10.0 == 10.5);
        CHECK(std::round(cmp.rows[2].saving_pct * 10.0) / 10.0 == 17.7);
    }
    SUBCASE("mismatched scenario cores are refused") {
        ExperimentResult alien = b;
        alien.scenario_fingerprint = 43;
        const std::vector<ExperimentResult> rs{a, alien};
        CHECK_THROWS_AS(compare(rs), ValidationError);
    }
    SUBCASE("fewer than two results is an error") {
        const std::vector<ExperimentResult> rs{a};
        CHECK_THROWS_AS(compare(rs), ValidationError);
    }
}

TEST_CASE("experiment outputs land on disk") {
    const Scenario s = quick_scenario();
    const ExperimentResult r = run_experiment(s, Strategy::rc2);
    const auto dir = std::filesystem::temp_directory_path() / "dfclab_out_test";
    r.save(dir);
    CHECK(std::filesystem::exists(dir / "result_rc2.json"));
    CHECK(std::filesystem::exists(dir / "trace_rc2.csv"));
    std::filesystem::remove_all(dir);
}
