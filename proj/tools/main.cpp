// dfclab - desk-scale building-energy control laboratory CLI.
//
// Subcommands:
//   weather synth   generate a synthetic weather CSV
//   weather train   train and serialize the one-step weather forecaster
//   run             run one strategy on a scenario
//   compare         run rc1/rc2/dfc on one scenario and summarize

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dfclab/errors.hpp"
#include "dfclab/experiment.hpp"
#include "dfclab/forecast.hpp"
#include "dfclab/scenario.hpp"
#include "dfclab/weather_io.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_runtime = 3;

using namespace dfclab;

harness::Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed) {
    harness::Scenario scenario = harness::Scenario::load(path);
    if (seed) {
        if (!scenario.weather.synthetic)
            throw ValidationError("--seed override requires a synthetic weather source");
        scenario.weather.synthetic->seed = *seed;
    }
    return scenario;
}

int run_weather_synth(std::uint64_t seed, int days, double dt, int start_day,
                      const std::string& out) {
    harness::SyntheticWeatherConfig cfg;
    cfg.seed = seed;
    cfg.days = days;
    cfg.dt_s = dt;
    cfg.start_day_of_year = start_day;
    const auto series = harness::generate_synthetic_weather(cfg);
    harness::save_weather_csv(series, out);
    std::printf("wrote %zu records to %s\n", series.size(), out.c_str());
    return exit_ok;
}

int run_weather_train(const std::string& in, const std::string& model_out, int lags) {
    const auto series = harness::load_weather_csv(in);
    forecast::WindowSpec spec;
    spec.lag_count = lags;
    gbdt::TrainConfig config;
    const auto model = forecast::train_weather_model(series, spec, config);
    model.save(model_out);
    if (model.heldout_r2.defined)
        std::printf("held-out R^2:          %.4f\n", model.heldout_r2.value);
    else
        std::printf("held-out R^2:          undefined (zero variance)\n");
    if (model.persistence_r2.defined)
        std::printf("persistence baseline:  %.4f\n", model.persistence_r2.value);
    else
        std::printf("persistence baseline:  undefined (zero variance)\n");
    std::printf("model written to %s\n", model_out.c_str());
    return exit_ok;
}

int run_single(const std::string& scenario_path, const std::string& strategy_name,
               const std::string& out_dir, std::optional<std::uint64_t> seed) {
    const harness::Scenario scenario = load_scenario(scenario_path, seed);
    const harness::Strategy strategy = harness::strategy_from_string(strategy_name);
    const harness::ExperimentResult result = harness::run_experiment(scenario, strategy);
    result.save(out_dir);
    std::printf("%-4s energy %.4f kWh/(day*m^2), occupied violations %.2f%%, mean COP %.2f\n",
                result.strategy.c_str(), result.energy_kwh_per_day_m2,
                100.0 * result.violation_fraction_occupied, result.mean_cop);
    return exit_ok;
}

int run_compare(const std::string& scenario_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed) {
    const harness::Scenario scenario = load_scenario(scenario_path, seed);
    std::vector<harness::ExperimentResult> results;
    for (auto strategy :
         {harness::Strategy::rc1, harness::Strategy::rc2, harness::Strategy::dfc}) {
        results.push_back(harness::run_experiment(scenario, strategy));
        results.back().save(out_dir);
    }
    const harness::Comparison cmp = harness::compare(results);

    const std::string table = cmp.format_table();
    std::fputs(table.c_str(), stdout);

    std::filesystem::create_directories(out_dir);
    std::ofstream summary_txt(std::filesystem::path(out_dir) / "summary.txt");
    summary_txt << table;
    std::ofstream summary_json(std::filesystem::path(out_dir) / "summary.json");
    summary_json << cmp.to_json() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dfclab - building-energy control strategies on an RC thermal testbed"};
    app.require_subcommand(1);

    // weather synth/train
    auto* weather = app.add_subcommand("weather", "weather data utilities");
    weather->require_subcommand(1);

    std::uint64_t seed = 1;
    int days = 30;
    double dt = 600.0;
    int start_day = 335;
    std::string out_file;
    auto* synth = weather->add_subcommand("synth", "emit a synthetic weather CSV");
    synth->add_option("--seed", seed, "generator seed")->required();
    synth->add_option("--days", days, "number of days")->required();
    synth->add_option("--dt", dt, "record spacing, seconds")->capture_default_str();
    synth->add_option("--start-day", start_day, "start day of year")->capture_default_str();
    synth->add_option("--out", out_file, "output CSV path")->required();

    std::string train_in, model_out;
    int lags = 6;
    auto* train = weather->add_subcommand("train", "train the one-step forecaster");
    train->add_option("--in", train_in, "weather CSV path")->required();
    train->add_option("--model", model_out, "output model path")->required();
    train->add_option("--lags", lags, "lagged steps per feature column")->capture_default_str();

    // run
    std::string scenario_path, strategy_name, out_dir;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_value = 0;
    auto* run = app.add_subcommand("run", "run one strategy on a scenario");
    run->add_option("--scenario", scenario_path, "scenario JSON path")->required();
    run->add_option("--strategy", strategy_name, "rc1|rc2|dfc")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    auto* run_seed = run->add_option("--seed", seed_value, "override the synthetic weather seed");

    // compare
    std::string cmp_scenario, cmp_out;
    std::uint64_t cmp_seed_value = 0;
    auto* cmp = app.add_subcommand("compare", "run all three strategies and summarize");
    cmp->add_option("--scenario", cmp_scenario, "scenario JSON path")->required();
    cmp->add_option("--out", cmp_out, "output directory")->required();
    auto* cmp_seed = cmp->add_option("--seed", cmp_seed_value, "override the synthetic weather seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return run_weather_synth(seed, days, dt, start_day, out_file);
        if (train->parsed()) return run_weather_train(train_in, model_out, lags);
        if (run->parsed()) {
            if (run_seed->count()) seed_override = seed_value;
            return run_single(scenario_path, strategy_name, out_dir, seed_override);
        }
        if (cmp->parsed()) {
            std::optional<std::uint64_t> s;
            if (cmp_seed->count()) s = cmp_seed_value;
            return run_compare(cmp_scenario, cmp_out, s);
        }
    } catch (const dfclab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const dfclab::RuntimeFault& e) {
        std::cerr << "fault: " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "fault: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}
