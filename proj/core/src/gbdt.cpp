#include "dfclab/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace dfclab::gbdt {

const char* to_string(Loss loss) {
    return loss == Loss::squared ? "squared" : "absolute";
}

Loss loss_from_string(const std::string& name) {
    if (name == "squared") return Loss::squared;
    if (name == "absolute") return Loss::absolute;
    throw ValidationError("unknown loss '" + name + "' (expected squared|absolute)");
}

double loss_value(Loss loss, double target, double prediction) {
    const double d = target - prediction;
    return loss == Loss::squared ? d * d : std::abs(d);
}

double negative_gradient(Loss loss, double target, double prediction) {
    const double d = target - prediction;
    if (loss == Loss::squared) return d;
    return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
}

void Dataset::add_row(std::span<const double> x, double target) {
    if (static_cast<int>(x.size()) != n_features_)
        throw ValidationError("dataset: row arity " + std::to_string(x.size()) +
                              " does not match n_features " + std::to_string(n_features_));
    features_.insert(features_.end(), x.begin(), x.end());
    targets_.push_back(target);
}

void Dataset::reserve(std::size_t rows) {
    features_.reserve(rows * static_cast<std::size_t>(n_features_));
    targets_.reserve(rows);
}

void Dataset::validate() const {
    if (n_features_ < 1) throw ValidationError("dataset: needs at least one feature");
    if (targets_.empty()) throw ValidationError("dataset: needs at least one row");
    for (double v : features_)
        if (!std::isfinite(v)) throw ValidationError("dataset: non-finite feature value");
    for (double v : targets_)
        if (!std::isfinite(v)) throw ValidationError("dataset: non-finite target value");
}

void TreeConfig::validate() const {
    if (max_leaves < 1) throw ValidationError("tree config: max_leaves must be >= 1");
    if (min_samples_leaf < 1) throw ValidationError("tree config: min_samples_leaf must be >= 1");
}

void TrainConfig::validate() const {
    if (iterations < 1) throw ValidationError("train config: iterations must be >= 1");
    if (!(learning_rate > 0.0) || learning_rate > 1.0)
        throw ValidationError("train config: learning_rate must be in (0, 1]");
    tree.validate();
}

int RegressionTree::find_leaf(std::span<const double> x) const {
    int i = 0;
    while (!nodes[i].is_leaf())
        i = (x[nodes[i].feature] <= nodes[i].threshold) ? nodes[i].left : nodes[i].right;
    return i;
}

int RegressionTree::leaf_count() const {
    int n = 0;
    for (const auto& node : nodes) n += node.is_leaf() ? 1 : 0;
    return n;
}

namespace {

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Lower median: element at index (n-1)/2 of the sorted sequence.
double lower_median(std::span<const double> v) {
    std::vector<double> s(v.begin(), v.end());
    const std::size_t k = (s.size() - 1) / 2;
    std::nth_element(s.begin(), s.begin() + k, s.end());
    return s[k];
}

} // namespace

double init_constant(std::span<const double> targets, Loss loss) {
    if (targets.empty()) throw ValidationError("init_constant: empty targets");
    for (double t : targets)
        if (!std::isfinite(t)) throw ValidationError("init_constant: non-finite target");
    return loss == Loss::squared ? mean(targets) : lower_median(targets);
}

std::vector<double> pseudo_residuals(std::span<const double> targets,
                                     std::span<const double> predictions, Loss loss) {
    if (targets.size() != predictions.size())
        throw ValidationError("pseudo_residuals: length mismatch");
    std::vector<double> r(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        r[i] = negative_gradient(loss, targets[i], predictions[i]);
    return r;
}

double leaf_value(std::span<const double> target_minus_prediction, Loss loss) {
    if (target_minus_prediction.empty())
        throw RuntimeFault("leaf_value: empty terminal region");
    return loss == Loss::squared ? mean(target_minus_prediction)
                                 : lower_median(target_minus_prediction);
}

namespace {

// Split search over per-feature presorted row indices. A node owns one index
// array per feature, each sorted by that feature; child arrays are produced
// by a stable partition so the sort order survives splits.
struct NodeRows {
    std::vector<std::vector<int>> sorted; // [feature][position] -> row index
    std::size_t size() const { return sorted.empty() ? 0 : sorted[0].size(); }
};

struct SplitChoice {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double node_sse(std::span<const int> rows, std::span<const double> y) {
    double sum = 0.0, sumsq = 0.0;
    for (int r : rows) {
        sum += y[r];
        sumsq += y[r] * y[r];
    }
    const double n = static_cast<double>(rows.size());
    return sumsq - sum * sum / n;
}

SplitChoice best_split(const Dataset& data, std::span<const double> y, const NodeRows& rows,
                       int min_samples_leaf) {
    SplitChoice best;
    const std::size_t n = rows.size();
    if (n < 2 * static_cast<std::size_t>(min_samples_leaf)) return best;

    double total_sum = 0.0, total_sumsq = 0.0;
    for (int r : rows.sorted[0]) {
        total_sum += y[r];
        total_sumsq += y[r] * y[r];
    }
    const double parent_sse = total_sumsq - total_sum * total_sum / static_cast<double>(n);

    for (int f = 0; f < data.n_features(); ++f) {
        const std::vector<int>& order = rows.sorted[f];
        double left_sum = 0.0, left_sumsq = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const int r = order[i];
            left_sum += y[r];
            left_sumsq += y[r] * y[r];
            const double v = data.feature(r, f);
            const double v_next = data.feature(order[i + 1], f);
            if (v == v_next) continue; // only split between distinct values
            const std::size_t n_left = i + 1, n_right = n - n_left;
            if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
                n_right < static_cast<std::size_t>(min_samples_leaf))
                continue;
            const double right_sum = total_sum - left_sum;
            const double right_sumsq = total_sumsq - left_sumsq;
            const double sse_l = left_sumsq - left_sum * left_sum / static_cast<double>(n_left);
            const double sse_r =
                right_sumsq - right_sum * right_sum / static_cast<double>(n_right);
            const double gain = parent_sse - sse_l - sse_r;
            // Strict > keeps the lowest feature index and lowest threshold on ties.
            if (gain > best.gain) {
                best.valid = true;
                best.feature = f;
                best.threshold = v + 0.5 * (v_next - v);
                best.gain = gain;
            }
        }
    }
    return best;
}

NodeRows presort(const Dataset& data) {
    NodeRows rows;
    rows.sorted.resize(data.n_features());
    const int n = static_cast<int>(data.n_rows());
    for (int f = 0; f < data.n_features(); ++f) {
        auto& order = rows.sorted[f];
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return data.feature(a, f) < data.feature(b, f);
        });
    }
    return rows;
}

// Stable partition of every per-feature order by the chosen split.
std::pair<NodeRows, NodeRows> partition(const Dataset& data, const NodeRows& rows,
                                        const SplitChoice& split) {
    NodeRows left, right;
    left.sorted.resize(rows.sorted.size());
    right.sorted.resize(rows.sorted.size());
    for (std::size_t f = 0; f < rows.sorted.size(); ++f) {
        for (int r : rows.sorted[f]) {
            if (data.feature(r, split.feature) <= split.threshold)
                left.sorted[f].push_back(r);
            else
                right.sorted[f].push_back(r);
        }
    }
    return {std::move(left), std::move(right)};
}

struct OpenLeaf {
    int node_id;
    NodeRows rows;
    SplitChoice split;
};

RegressionTree fit_tree_presorted(const Dataset& data, std::span<const double> y,
                                  NodeRows root_rows, const TreeConfig& cfg) {
    RegressionTree tree;

    const auto leaf_mean = [&](const NodeRows& rows) {
        double s = 0.0;
        for (int r : rows.sorted[0]) s += y[r];
        return s / static_cast<double>(rows.size());
    };

    tree.nodes.push_back(TreeNode{.value = leaf_mean(root_rows)});

    std::vector<OpenLeaf> open;
    open.push_back({0, std::move(root_rows), {}});
    open.back().split = best_split(data, y, open.back().rows, cfg.min_samples_leaf);

    int leaves = 1;
    while (leaves < cfg.max_leaves) {
        // Best-first: split the open leaf with the largest gain; on equal
        // gains the earliest-created leaf wins, keeping growth deterministic.
        int pick = -1;
        for (std::size_t i = 0; i < open.size(); ++i) {
            if (!open[i].split.valid) continue;
            if (pick < 0 || open[i].split.gain > open[pick].split.gain)
                pick = static_cast<int>(i);
        }
        if (pick < 0) break;

        OpenLeaf leaf = std::move(open[pick]);
        open.erase(open.begin() + pick);

        auto [left_rows, right_rows] = partition(data, leaf.rows, leaf.split);

        const int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{.value = leaf_mean(left_rows)});
        const int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{.value = leaf_mean(right_rows)});

        TreeNode& parent = tree.nodes[leaf.node_id];
        parent.feature = leaf.split.feature;
        parent.threshold = leaf.split.threshold;
        parent.left = left_id;
        parent.right = right_id;
        ++leaves;

        OpenLeaf l{left_id, std::move(left_rows), {}};
        l.split = best_split(data, y, l.rows, cfg.min_samples_leaf);
        OpenLeaf r{right_id, std::move(right_rows), {}};
        r.split = best_split(data, y, r.rows, cfg.min_samples_leaf);
        open.push_back(std::move(l));
        open.push_back(std::move(r));
    }
    return tree;
}

} // namespace

RegressionTree fit_tree(const Dataset& data, const TreeConfig& config) {
    data.validate();
    config.validate();
    return fit_tree_presorted(data, data.targets(), presort(data), config);
}

double Ensemble::predict(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_features)
        throw ValidationError("predict: feature arity " + std::to_string(x.size()) +
                              " does not match model arity " + std::to_string(n_features));
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(x);
    return base_value + learning_rate * sum;
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
    data.validate();
    config.validate();

    const std::size_t n = data.n_rows();
    TrainResult result;
    result.model.loss = config.loss;
    result.model.learning_rate = config.learning_rate;
    result.model.n_features = data.n_features();
    result.model.base_value = init_constant(data.targets(), config.loss);
    result.model.trees.reserve(config.iterations);

    std::vector<double> predictions(n, result.model.base_value);
    const NodeRows presorted = presort(data);

    for (int m = 0; m < config.iterations; ++m) {
        const std::vector<double> residuals =
            pseudo_residuals(data.targets(), predictions, config.loss);

        RegressionTree tree =
            fit_tree_presorted(data, residuals, presorted, config.tree);

        // Terminal-region values: refit each leaf on (target - prediction).
        // For squared loss this equals the fitted mean; for absolute loss it
        // replaces the sign-residual mean with the in-leaf median.
        std::vector<int> leaf_of(n);
        std::vector<std::vector<double>> members(tree.nodes.size());
        for (std::size_t i = 0; i < n; ++i) {
            leaf_of[i] = tree.find_leaf(data.row(i));
            members[leaf_of[i]].push_back(data.target(i) - predictions[i]);
        }
        for (std::size_t node = 0; node < tree.nodes.size(); ++node)
            if (tree.nodes[node].is_leaf() && !members[node].empty())
                tree.nodes[node].value = leaf_value(members[node], config.loss);

        for (std::size_t i = 0; i < n; ++i)
            predictions[i] += config.learning_rate * tree.nodes[leaf_of[i]].value;

        double loss_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            loss_sum += loss_value(config.loss, data.target(i), predictions[i]);
        result.round_losses.push_back(loss_sum / static_cast<double>(n));

        result.model.trees.push_back(std::move(tree));
    }
    return result;
}

} // namespace dfclab::gbdt
