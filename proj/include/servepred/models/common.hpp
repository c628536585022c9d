// common.hpp - model kinds, hyperparameters, small shared helpers
#pragma once

#include <charconv>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "servepred/errors.hpp"

namespace servepred {

enum class ModelKind { LR, DT, RF, SVM, NN };

inline const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::LR: return "LR";
        case ModelKind::DT: return "DT";
        case ModelKind::RF: return "RF";
        case ModelKind::SVM: return "SVM";
        case ModelKind::NN: return "NN";
    }
    return "?";
}

inline ModelKind model_kind_from(const std::string& s) {
    if (s == "LR") return ModelKind::LR;
    if (s == "DT") return ModelKind::DT;
    if (s == "RF") return ModelKind::RF;
    if (s == "SVM") return ModelKind::SVM;
    if (s == "NN") return ModelKind::NN;
    throw DataError("unknown model kind: " + s);
}

// One bag of knobs for all five trainers; each reads the fields it needs.
struct Hyperparams {
    // gradient-descent family (LR, SVM, NN)
    double learning_rate = 0.1;  // halved whenever a step increases the loss
    double l2 = 1e-4;
    double tol = 1e-6;    // converged when the loss improves by less
    int max_epochs = 2000;
    int batch_size = 64;  // NN minibatch
    int patience = 10;    // NN plateau epochs before early stop
    int hidden1 = 200, hidden2 = 100;

    // tree family (DT, RF)
    int max_depth = 150;  // 0 = root leaf only
    int min_samples_split = 2;
    int n_trees = 200;
    bool bootstrap = true;
    int mtry = 0;  // features tried per split: 0 = round(sqrt(F)), -1 = all
};

// Fitted fallback when training saw a single class; always predicts it.
struct ConstantModel {
    int cls = 0;
};

// Argmax with ties broken toward the lowest index.
inline int argmax_lowest(std::span<const double> v) {
    int best = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = static_cast<int>(i);
    return best;
}

inline int n_classes_of(std::span<const int> y) {
    int hi = -1;
    for (int v : y)
        if (v > hi) hi = v;
    return hi + 1;
}

inline bool single_class(std::span<const int> y) {
    for (size_t i = 1; i < y.size(); ++i)
        if (y[i] != y[0]) return false;
    return true;
}

// Shortest exact decimal representation; round-trips through parsing.
inline std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace servepred
