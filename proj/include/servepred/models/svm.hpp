// svm.hpp - linear one-vs-rest SVM trained by full-batch subgradient descent
// on the hinge loss with L2 penalty; decisions by argmax over margins.
// Expects standardized inputs.
#pragma once

#include <cmath>
#include <vector>

#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"

namespace servepred {

struct SvmModel {
    Matrix W;  // n_classes x n_features
    std::vector<double> b;
    int n_features = 0, n_classes = 0;

    void margins(const double* x, double* out) const {
        for (int c = 0; c < n_classes; ++c) {
            double m = b[c];
            const double* w = W.row(c);
            for (int j = 0; j < n_features; ++j) m += w[j] * x[j];
            out[c] = m;
        }
    }
};

namespace detail {

// One binary hinge objective: class c against the rest.
struct OvrProblem {
    const Matrix& X;
    std::vector<double> sign;  // +1 for class c, -1 otherwise

    double loss(const std::vector<double>& w, double b, double l2) const {
        double total = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            const double* x = X.row(i);
            double m = b;
            for (size_t j = 0; j < X.cols; ++j) m += w[j] * x[j];
            total += std::max(0.0, 1.0 - sign[i] * m);
        }
        total /= double(X.rows);
        double pen = 0;
        for (double v : w) pen += v * v;
        return total + 0.5 * l2 * pen;
    }

    void subgradient(const std::vector<double>& w, double b, double l2,
                     std::vector<double>& gw, double& gb) const {
        gw.assign(X.cols, 0.0);
        gb = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            const double* x = X.row(i);
            double m = b;
            for (size_t j = 0; j < X.cols; ++j) m += w[j] * x[j];
            if (sign[i] * m < 1.0) {
                for (size_t j = 0; j < X.cols; ++j) gw[j] -= sign[i] * x[j];
                gb -= sign[i];
            }
        }
        double inv = 1.0 / double(X.rows);
        for (auto& v : gw) v *= inv;
        gb *= inv;
        for (size_t j = 0; j < X.cols; ++j) gw[j] += l2 * w[j];
    }
};

}  // namespace detail

inline SvmModel fit_svm(const Dataset& train, const Hyperparams& hp) {
    const Matrix& X = train.X;
    int k = std::max(2, n_classes_of(train.y));

    SvmModel m;
    m.n_features = static_cast<int>(X.cols);
    m.n_classes = k;
    m.W = Matrix(k, X.cols);
    m.b.assign(k, 0.0);
    if (X.rows == 0) return m;

    for (int c = 0; c < k; ++c) {
        detail::OvrProblem prob{X, {}};
        prob.sign.resize(X.rows);
        for (size_t i = 0; i < X.rows; ++i) prob.sign[i] = train.y[i] == c ? 1.0 : -1.0;

        std::vector<double> w(X.cols, 0.0), gw;
        double b = 0, gb = 0;
        double lr = hp.learning_rate;
        double loss = prob.loss(w, b, hp.l2);
        for (int epoch = 0; epoch < hp.max_epochs; ++epoch) {
            prob.subgradient(w, b, hp.l2, gw, gb);
            bool accepted = false;
            while (lr > 1e-14) {
                std::vector<double> wc = w;
                for (size_t j = 0; j < wc.size(); ++j) wc[j] -= lr * gw[j];
                double bc = b - lr * gb;
                double cand = prob.loss(wc, bc, hp.l2);
                if (cand <= loss) {
                    w = std::move(wc);
                    b = bc;
                    double gain = loss - cand;
                    loss = cand;
                    accepted = true;
                    if (gain < hp.tol) epoch = hp.max_epochs;  // converged
                    break;
                }
                lr *= 0.5;
            }
            if (!accepted) break;
        }
        for (size_t j = 0; j < X.cols; ++j) m.W.at(c, j) = w[j];
        m.b[c] = b;
    }
    return m;
}

}  // namespace servepred
