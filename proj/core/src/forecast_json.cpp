#include <fstream>

#include "dfclab/forecast.hpp"
#include "json.hpp"

namespace dfclab::forecast {

void WeatherModel::save(const std::filesystem::path& path) const {
    nlohmann::json doc;
    doc["format"] = "dfclab-weather-model";
    doc["version"] = 1;
    doc["interval_s"] = interval_s;
    doc["spec"] = {{"lag_count", spec.lag_count},
                   {"target_column", to_string(spec.target_column)},
                   {"calendar_features", spec.calendar_features}};
    auto& cols = doc["spec"]["feature_columns"] = nlohmann::json::array();
    for (WeatherField f : spec.feature_columns) cols.push_back(to_string(f));
    doc["heldout_r2"] = {{"value", heldout_r2.value}, {"defined", heldout_r2.defined}};
    doc["persistence_r2"] = {{"value", persistence_r2.value},
                             {"defined", persistence_r2.defined}};
    doc["ensemble"] = nlohmann::json::parse(model.to_json());

    std::ofstream out(path);
    if (!out) throw ValidationError("weather model: cannot open for writing: " + path.string());
    out << doc.dump(2) << '\n';
}

WeatherModel WeatherModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("weather model: cannot open: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("weather model: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "dfclab-weather-model")
            throw ValidationError("weather model: unexpected format tag");
        if (doc.at("version").get<int>() != 1)
            throw ValidationError("weather model: unsupported version");

        WeatherModel wm;
        wm.interval_s = doc.at("interval_s").get<double>();
        const auto& spec_doc = doc.at("spec");
        wm.spec.lag_count = spec_doc.at("lag_count").get<int>();
        wm.spec.target_column = field_from_string(spec_doc.at("target_column").get<std::string>());
        wm.spec.calendar_features = spec_doc.at("calendar_features").get<bool>();
        wm.spec.feature_columns.clear();
        for (const auto& name : spec_doc.at("feature_columns"))
            wm.spec.feature_columns.push_back(field_from_string(name.get<std::string>()));
        wm.heldout_r2 = {doc.at("heldout_r2").at("value").get<double>(),
                         doc.at("heldout_r2").at("defined").get<bool>()};
        wm.persistence_r2 = {doc.at("persistence_r2").at("value").get<double>(),
                             doc.at("persistence_r2").at("defined").get<bool>()};
        wm.model = gbdt::Ensemble::from_json(doc.at("ensemble").dump());
        return wm;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("weather model: malformed document: ") + e.what());
    }
}

} // namespace dfclab::forecast
