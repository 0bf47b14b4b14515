#include <fstream>

#include "dfclab/gbdt.hpp"
#include "json.hpp"

namespace dfclab::gbdt {

namespace {
constexpr const char* format_name = "dfclab-gbdt";
constexpr int format_version = 1;
} // namespace

std::string Ensemble::to_json() const {
    nlohmann::json doc;
    doc["format"] = format_name;
    doc["version"] = format_version;
    doc["loss"] = to_string(loss);
    doc["n_features"] = n_features;
    doc["base_value"] = base_value;
    doc["learning_rate"] = learning_rate;
    auto& tree_array = doc["trees"] = nlohmann::json::array();
    for (const auto& tree : trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf()) {
                nodes.push_back({{"value", n.value}});
            } else {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right}});
            }
        }
        tree_array.push_back({{"nodes", std::move(nodes)}});
    }
    return doc.dump(2);
}

Ensemble Ensemble::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != format_name)
            throw ValidationError("model: unexpected format tag");
        if (doc.at("version").get<int>() != format_version)
            throw ValidationError("model: unsupported format version");

        Ensemble e;
        e.loss = loss_from_string(doc.at("loss").get<std::string>());
        e.n_features = doc.at("n_features").get<int>();
        e.base_value = doc.at("base_value").get<double>();
        e.learning_rate = doc.at("learning_rate").get<double>();
        for (const auto& tree_doc : doc.at("trees")) {
            RegressionTree tree;
            for (const auto& node_doc : tree_doc.at("nodes")) {
                TreeNode n;
                if (node_doc.contains("feature")) {
                    n.feature = node_doc.at("feature").get<int>();
                    n.threshold = node_doc.at("threshold").get<double>();
                    n.left = node_doc.at("left").get<int>();
                    n.right = node_doc.at("right").get<int>();
                } else {
                    n.value = node_doc.at("value").get<double>();
                }
                tree.nodes.push_back(n);
            }
            if (tree.nodes.empty()) throw ValidationError("model: empty tree");
            e.trees.push_back(std::move(tree));
        }
        return e;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: malformed document: ") + e.what());
    }
}

void Ensemble::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("model: cannot open for writing: " + path.string());
    out << to_json() << '\n';
}

Ensemble Ensemble::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("model: cannot open: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

} // namespace dfclab::gbdt
