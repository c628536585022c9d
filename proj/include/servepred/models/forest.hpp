// forest.hpp - bagged CART trees with per-split feature subsampling
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "servepred/models/tree.hpp"
#include "servepred/rng.hpp"

namespace servepred {

struct ForestModel {
    std::vector<TreeModel> trees;
    int n_features = 0, n_classes = 0;

    // majority vote, ties toward the lowest class index
    int predict_row(const double* x) const {
        std::vector<int> votes(n_classes, 0);
        for (const TreeModel& t : trees) votes[t.predict_row(x)] += 1;
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (votes[c] > votes[best]) best = c;
        return best;
    }
};

// Each tree sees a bootstrap sample of exactly n rows (when enabled) and a
// deterministic per-tree RNG derived from the master seed, so the fit is
// independent of any trainer-side scheduling.
inline ForestModel fit_forest(const Matrix& X, const std::vector<int>& y, int n_classes,
                              const Hyperparams& hp, uint64_t seed) {
    ForestModel f;
    f.n_features = static_cast<int>(X.cols);
    f.n_classes = n_classes;
    int mtry = hp.mtry;
    if (mtry == 0)
        mtry = std::max(1, (int)std::lround(std::sqrt(double(X.cols))));
    if (mtry < 0) mtry = 0;  // 0 = all features inside the tree builder

    f.trees.reserve(hp.n_trees);
    const size_t n = X.rows;
    for (int t = 0; t < hp.n_trees; ++t) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(t)));
        std::vector<int> rows;
        rows.reserve(n);
        if (hp.bootstrap) {
            for (size_t i = 0; i < n; ++i)
                rows.push_back(static_cast<int>(uniform_below(rng, n)));
        } else {
            for (size_t i = 0; i < n; ++i) rows.push_back(static_cast<int>(i));
        }
        f.trees.push_back(fit_tree(X, y, n_classes, hp, mtry, &rng, &rows));
    }
    return f;
}

// Mean of the per-tree normalized importances, re-normalized.
inline std::vector<double> forest_importances(const ForestModel& f) {
    std::vector<double> imp(f.n_features, 0.0);
    for (const TreeModel& t : f.trees) {
        std::vector<double> ti = tree_importances(t);
        for (int j = 0; j < f.n_features; ++j) imp[j] += ti[j];
    }
    double sum = 0;
    for (double v : imp) sum += v;
    if (sum > 0)
        for (double& v : imp) v /= sum;
    return imp;
}

}  // namespace servepred
