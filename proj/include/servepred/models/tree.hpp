// tree.hpp - CART classification tree with Gini impurity
//
// Split search scans candidate features in ascending order and thresholds at
// midpoints between sorted distinct values; the first best split wins, so
// training is deterministic. A node splits whenever it is impure, deep
// enough is allowed and a valid split exists (zero-gain splits are taken,
// which lets the tree solve XOR-style data).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"
#include "servepred/rng.hpp"

namespace servepred {

struct TreeNode {
    int feature = -1;  // -1 = leaf
    double threshold = 0;
    int left = -1, right = -1;
    int leaf_class = 0;
    double impurity = 0;
    int n_samples = 0;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int n_features = 0, n_classes = 0;

    int predict_row(const double* x) const {
        int idx = 0;
        while (nodes[idx].feature >= 0)
            idx = x[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                                : nodes[idx].right;
        return nodes[idx].leaf_class;
    }
};

namespace detail {

inline double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0;
    double g = 1.0;
    for (int c : counts) {
        double p = double(c) / total;
        g -= p * p;
    }
    return g;
}

struct TreeBuilder {
    const Matrix& X;
    const std::vector<int>& y;
    int n_classes;
    int max_depth;
    int min_samples_split;
    int mtry;                 // 0 = all features, else sample this many per split
    std::mt19937_64* rng;     // needed only when mtry > 0
    TreeModel out;

    TreeBuilder(const Matrix& x, const std::vector<int>& labels, int k,
                const Hyperparams& hp, int mtry_, std::mt19937_64* r)
        : X(x), y(labels), n_classes(k), max_depth(hp.max_depth),
          min_samples_split(hp.min_samples_split), mtry(mtry_), rng(r) {
        out.n_features = static_cast<int>(X.cols);
        out.n_classes = k;
    }

    int build(std::vector<int>& rows, int depth) {
        std::vector<int> counts(n_classes, 0);
        for (int r : rows) counts[y[r]] += 1;
        int n = static_cast<int>(rows.size());

        TreeNode node;
        node.n_samples = n;
        node.impurity = gini(counts, n);
        node.leaf_class = argmax_int(counts);
        int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back(node);

        bool can_split = node.impurity > 0 && depth < max_depth && n >= min_samples_split;
        if (!can_split) return idx;

        int best_feature = -1;
        double best_threshold = 0, best_gain = -1;
        for (int f : candidate_features()) {
            search_feature(rows, counts, n, node.impurity, f, best_feature,
                           best_threshold, best_gain);
        }
        if (best_feature < 0) return idx;  // no valid split (all values equal)

        std::vector<int> left_rows, right_rows;
        left_rows.reserve(rows.size());
        for (int r : rows)
            (X.at(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        int l = build(left_rows, depth + 1);
        int r = build(right_rows, depth + 1);
        out.nodes[idx].feature = best_feature;
        out.nodes[idx].threshold = best_threshold;
        out.nodes[idx].left = l;
        out.nodes[idx].right = r;
        return idx;
    }

    static int argmax_int(const std::vector<int>& v) {
        int best = 0;
        for (size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[best]) best = static_cast<int>(i);
        return best;
    }

    std::vector<int> candidate_features() {
        int f = static_cast<int>(X.cols);
        std::vector<int> all(f);
        for (int i = 0; i < f; ++i) all[i] = i;
        if (mtry <= 0 || mtry >= f || !rng) return all;
        // partial Fisher-Yates, then ascending for a deterministic scan order
        for (int i = 0; i < mtry; ++i) {
            int j = i + static_cast<int>(uniform_below(*rng, f - i));
            std::swap(all[i], all[j]);
        }
        all.resize(mtry);
        std::sort(all.begin(), all.end());
        return all;
    }

    void search_feature(const std::vector<int>& rows, const std::vector<int>& counts,
                        int n, double node_impurity, int f, int& best_feature,
                        double& best_threshold, double& best_gain) {
        std::vector<std::pair<double, int>> vals;
        vals.reserve(rows.size());
        for (int r : rows) vals.emplace_back(X.at(r, f), y[r]);
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vals.front().first == vals.back().first) return;

        std::vector<int> left(n_classes, 0);
        int nl = 0;
        for (int i = 0; i + 1 < n; ++i) {
            left[vals[i].second] += 1;
            ++nl;
            if (vals[i].first == vals[i + 1].first) continue;
            int nr = n - nl;
            std::vector<int> right(counts);
            for (int c = 0; c < n_classes; ++c) right[c] -= left[c];
            double wl = double(nl) / n, wr = double(nr) / n;
            double gain = node_impurity - wl * gini(left, nl) - wr * gini(right, nr);
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = f;
                best_threshold = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
            }
        }
    }
};

}  // namespace detail

inline TreeModel fit_tree(const Matrix& X, const std::vector<int>& y, int n_classes,
                          const Hyperparams& hp, int mtry = 0,
                          std::mt19937_64* rng = nullptr,
                          const std::vector<int>* row_subset = nullptr) {
    detail::TreeBuilder builder(X, y, n_classes, hp, mtry, rng);
    std::vector<int> rows;
    if (row_subset) {
        rows = *row_subset;
    } else {
        rows.resize(X.rows);
        for (size_t i = 0; i < X.rows; ++i) rows[i] = static_cast<int>(i);
    }
    builder.build(rows, 0);
    return std::move(builder.out);
}

// Gini importance: total weighted impurity decrease per feature, normalized
// to sum to 1. A tree without splits has all-zero importances.
inline std::vector<double> tree_importances(const TreeModel& t) {
    std::vector<double> imp(t.n_features, 0.0);
    if (t.nodes.empty()) return imp;
    double total_n = t.nodes[0].n_samples;
    for (const TreeNode& node : t.nodes) {
        if (node.feature < 0) continue;
        const TreeNode& l = t.nodes[node.left];
        const TreeNode& r = t.nodes[node.right];
        double decrease = node.n_samples * node.impurity - l.n_samples * l.impurity -
                          r.n_samples * r.impurity;
        imp[node.feature] += decrease / total_n;
    }
    double sum = 0;
    for (double v : imp) sum += v;
    if (sum > 0)
        for (double& v : imp) v /= sum;
    return imp;
}

}  // namespace servepred
