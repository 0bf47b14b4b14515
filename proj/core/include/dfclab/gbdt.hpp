#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dfclab/errors.hpp"

namespace dfclab::gbdt {

enum class Loss { squared, absolute };

const char* to_string(Loss loss);
Loss loss_from_string(const std::string& name);

double loss_value(Loss loss, double target, double prediction);
double negative_gradient(Loss loss, double target, double prediction);

/// Row-major feature matrix plus one scalar target per row.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(int n_features) : n_features_(n_features) {}

    void add_row(std::span<const double> x, double target);
    void reserve(std::size_t rows);

    int n_features() const { return n_features_; }
    std::size_t n_rows() const { return targets_.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * static_cast<std::size_t>(n_features_),
                static_cast<std::size_t>(n_features_)};
    }
    double feature(std::size_t row, int col) const {
        return features_[row * static_cast<std::size_t>(n_features_) + col];
    }
    double target(std::size_t i) const { return targets_[i]; }
    std::span<const double> targets() const { return targets_; }

    void validate() const; // arity fixed at construction; checks n >= 1 and all values finite

private:
    int n_features_ = 0;
    std::vector<double> features_;
    std::vector<double> targets_;
};

/// Internal node when feature >= 0, leaf otherwise.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct TreeConfig {
    int max_leaves = 31;
    int min_samples_leaf = 5;

    void validate() const;
};

/// Binary regression tree; x[feature] <= threshold routes left.
struct RegressionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    double predict(std::span<const double> x) const { return nodes[find_leaf(x)].value; }
    int find_leaf(std::span<const double> x) const;
    int leaf_count() const;
};

/// Constant minimizing the total loss over the targets: mean for squared
/// loss, lower median for absolute loss.
double init_constant(std::span<const double> targets, Loss loss);

/// Elementwise negative gradient of the loss at the current predictions.
std::vector<double> pseudo_residuals(std::span<const double> targets,
                                     std::span<const double> predictions, Loss loss);

/// Optimal leaf update given the per-member values (target - prior prediction):
/// their mean for squared loss, their lower median for absolute loss.
double leaf_value(std::span<const double> target_minus_prediction, Loss loss);

/// Greedy best-first tree on (x, residual) rows: every split maximizes the
/// squared-error reduction over all features and all midpoints between
/// consecutive distinct sorted values. Ties resolve to the lowest feature
/// index, then the lowest threshold. Leaf values are the member means.
RegressionTree fit_tree(const Dataset& data, const TreeConfig& config);

struct TrainConfig {
    int iterations = 200;       ///< boosting rounds M
    double learning_rate = 0.1; ///< shrinkage v in (0, 1]
    Loss loss = Loss::squared;
    TreeConfig tree;

    void validate() const;
};

struct Ensemble {
    double base_value = 0.0;
    double learning_rate = 0.1;
    Loss loss = Loss::squared;
    int n_features = 0;
    std::vector<RegressionTree> trees;

    /// base_value + learning_rate * sum of tree outputs; pure and deterministic.
    double predict(std::span<const double> x) const;

    std::string to_json() const;
    static Ensemble from_json(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static Ensemble load(const std::filesystem::path& path);
};

struct TrainResult {
    Ensemble model;
    std::vector<double> round_losses; ///< mean training loss after each round
};

TrainResult train(const Dataset& data, const TrainConfig& config);

} // namespace dfclab::gbdt
