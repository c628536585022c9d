// logistic.hpp - multinomial (softmax) regression, full-batch gradient
// descent with L2 penalty and a halve-on-increase learning rate, which makes
// the training loss non-increasing by construction.
#pragma once

#include <cmath>
#include <vector>

#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"

namespace servepred {

struct LogisticModel {
    Matrix W;  // n_classes x n_features
    std::vector<double> b;
    int n_features = 0, n_classes = 0;

    void logits(const double* x, double* out) const {
        for (int c = 0; c < n_classes; ++c) {
            double z = b[c];
            const double* w = W.row(c);
            for (int j = 0; j < n_features; ++j) z += w[j] * x[j];
            out[c] = z;
        }
    }

    void proba(const double* x, double* out) const {
        logits(x, out);
        double hi = out[0];
        for (int c = 1; c < n_classes; ++c) hi = std::max(hi, out[c]);
        double sum = 0;
        for (int c = 0; c < n_classes; ++c) {
            out[c] = std::exp(out[c] - hi);
            sum += out[c];
        }
        for (int c = 0; c < n_classes; ++c) out[c] /= sum;
    }
};

namespace detail {

inline double logistic_loss(const LogisticModel& m, const Matrix& X,
                            const std::vector<int>& y, double l2) {
    double loss = 0;
    std::vector<double> p(m.n_classes);
    for (size_t i = 0; i < X.rows; ++i) {
        m.proba(X.row(i), p.data());
        loss -= std::log(std::max(p[y[i]], 1e-300));
    }
    loss /= double(X.rows);
    double pen = 0;
    for (double w : m.W.data) pen += w * w;
    return loss + 0.5 * l2 * pen;
}

// Mean cross-entropy gradient plus the L2 term; biases unpenalized.
inline void logistic_gradient(const LogisticModel& m, const Matrix& X,
                              const std::vector<int>& y, double l2, Matrix& gW,
                              std::vector<double>& gb) {
    gW = Matrix(m.n_classes, m.n_features);
    gb.assign(m.n_classes, 0.0);
    std::vector<double> p(m.n_classes);
    for (size_t i = 0; i < X.rows; ++i) {
        const double* x = X.row(i);
        m.proba(x, p.data());
        for (int c = 0; c < m.n_classes; ++c) {
            double d = p[c] - (y[i] == c ? 1.0 : 0.0);
            gb[c] += d;
            double* g = gW.row(c);
            for (int j = 0; j < m.n_features; ++j) g[j] += d * x[j];
        }
    }
    double inv = 1.0 / double(X.rows);
    for (auto& v : gW.data) v *= inv;
    for (auto& v : gb) v *= inv;
    for (size_t k = 0; k < gW.data.size(); ++k) gW.data[k] += l2 * m.W.data[k];
}

}  // namespace detail

struct LogisticFit {
    LogisticModel model;
    std::vector<double> loss_curve;  // loss after each accepted epoch
    bool degenerate = false;
};

inline LogisticFit fit_logistic(const Dataset& train, const Hyperparams& hp) {
    LogisticFit fit;
    const Matrix& X = train.X;
    const std::vector<int>& y = train.y;
    int k = std::max(2, n_classes_of(y));

    LogisticModel& m = fit.model;
    m.n_features = static_cast<int>(X.cols);
    m.n_classes = k;
    m.W = Matrix(k, X.cols);  // zero init: uniform class probabilities
    m.b.assign(k, 0.0);
    if (X.rows == 0) return fit;

    double lr = hp.learning_rate;
    double loss = detail::logistic_loss(m, X, y, hp.l2);
    fit.loss_curve.push_back(loss);
    Matrix gW;
    std::vector<double> gb;
    for (int epoch = 0; epoch < hp.max_epochs; ++epoch) {
        detail::logistic_gradient(m, X, y, hp.l2, gW, gb);
        bool accepted = false;
        while (lr > 1e-14) {
            LogisticModel cand = m;
            for (size_t i = 0; i < cand.W.data.size(); ++i)
                cand.W.data[i] -= lr * gW.data[i];
            for (int c = 0; c < k; ++c) cand.b[c] -= lr * gb[c];
            double cand_loss = detail::logistic_loss(cand, X, y, hp.l2);
            if (cand_loss <= loss) {
                m = std::move(cand);
                accepted = true;
                double gain = loss - cand_loss;
                loss = cand_loss;
                fit.loss_curve.push_back(loss);
                if (gain < hp.tol) return fit;  // converged
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) break;  // step size exhausted
    }
    return fit;
}

}  // namespace servepred
