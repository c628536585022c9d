// mlp.hpp - feed-forward network: two ReLU hidden layers, softmax output,
// cross-entropy loss, seeded minibatch gradient descent. The epoch loss is
// kept monotone by reverting and halving the learning rate whenever a full
// epoch increased it; training stops on a loss plateau.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"
#include "servepred/rng.hpp"

namespace servepred {

struct MlpModel {
    int n_features = 0, h1 = 0, h2 = 0, n_classes = 0;
    // row-major [out x in]
    std::vector<double> W1, b1, W2, b2, W3, b3;

    void resize(int f, int a, int bdim, int k) {
        n_features = f;
        h1 = a;
        h2 = bdim;
        n_classes = k;
        W1.assign(size_t(a) * f, 0.0);
        b1.assign(a, 0.0);
        W2.assign(size_t(bdim) * a, 0.0);
        b2.assign(bdim, 0.0);
        W3.assign(size_t(k) * bdim, 0.0);
        b3.assign(k, 0.0);
    }

    struct Activations {
        std::vector<double> a1, a2, p;  // post-ReLU hiddens, output probs
    };

    void forward(const double* x, Activations& act) const {
        act.a1.assign(h1, 0.0);
        for (int i = 0; i < h1; ++i) {
            double z = b1[i];
            const double* w = W1.data() + size_t(i) * n_features;
            for (int j = 0; j < n_features; ++j) z += w[j] * x[j];
            act.a1[i] = z > 0 ? z : 0;
        }
        act.a2.assign(h2, 0.0);
        for (int i = 0; i < h2; ++i) {
            double z = b2[i];
            const double* w = W2.data() + size_t(i) * h1;
            for (int j = 0; j < h1; ++j) z += w[j] * act.a1[j];
            act.a2[i] = z > 0 ? z : 0;
        }
        act.p.assign(n_classes, 0.0);
        double hi = -1e300;
        for (int c = 0; c < n_classes; ++c) {
            double z = b3[c];
            const double* w = W3.data() + size_t(c) * h2;
            for (int j = 0; j < h2; ++j) z += w[j] * act.a2[j];
            act.p[c] = z;
            hi = std::max(hi, z);
        }
        double sum = 0;
        for (int c = 0; c < n_classes; ++c) {
            act.p[c] = std::exp(act.p[c] - hi);
            sum += act.p[c];
        }
        for (int c = 0; c < n_classes; ++c) act.p[c] /= sum;
    }

    int predict_row(const double* x) const {
        Activations act;
        forward(x, act);
        return argmax_lowest(act.p);
    }
};

// Gradient storage shares the model layout.
using MlpGradients = MlpModel;

// Mean cross-entropy over the rows plus (l2/2)*sum of squared weights.
inline double mlp_loss(const MlpModel& m, const Matrix& X, const std::vector<int>& y,
                       double l2) {
    double loss = 0;
    MlpModel::Activations act;
    for (size_t i = 0; i < X.rows; ++i) {
        m.forward(X.row(i), act);
        loss -= std::log(std::max(act.p[y[i]], 1e-300));
    }
    loss /= double(X.rows);
    double pen = 0;
    for (double v : m.W1) pen += v * v;
    for (double v : m.W2) pen += v * v;
    for (double v : m.W3) pen += v * v;
    return loss + 0.5 * l2 * pen;
}

// Backprop gradients of mlp_loss, averaged over the given rows.
inline MlpGradients mlp_gradients(const MlpModel& m, const Matrix& X,
                                  const std::vector<int>& y, double l2,
                                  const std::vector<int>* rows = nullptr) {
    MlpGradients g;
    g.resize(m.n_features, m.h1, m.h2, m.n_classes);
    size_t count = rows ? rows->size() : X.rows;
    MlpModel::Activations act;
    std::vector<double> d3(m.n_classes), d2(m.h2), d1(m.h1);
    for (size_t idx = 0; idx < count; ++idx) {
        size_t i = rows ? size_t((*rows)[idx]) : idx;
        const double* x = X.row(i);
        m.forward(x, act);
        for (int c = 0; c < m.n_classes; ++c)
            d3[c] = act.p[c] - (y[i] == c ? 1.0 : 0.0);
        for (int c = 0; c < m.n_classes; ++c) {
            double* gw = g.W3.data() + size_t(c) * m.h2;
            for (int j = 0; j < m.h2; ++j) gw[j] += d3[c] * act.a2[j];
            g.b3[c] += d3[c];
        }
        for (int j = 0; j < m.h2; ++j) {
            double s = 0;
            for (int c = 0; c < m.n_classes; ++c) s += m.W3[size_t(c) * m.h2 + j] * d3[c];
            d2[j] = act.a2[j] > 0 ? s : 0.0;
        }
        for (int j = 0; j < m.h2; ++j) {
            if (d2[j] == 0) continue;
            double* gw = g.W2.data() + size_t(j) * m.h1;
            for (int t = 0; t < m.h1; ++t) gw[t] += d2[j] * act.a1[t];
            g.b2[j] += d2[j];
        }
        for (int j = 0; j < m.h1; ++j) {
            double s = 0;
            for (int t = 0; t < m.h2; ++t) s += m.W2[size_t(t) * m.h1 + j] * d2[t];
            d1[j] = act.a1[j] > 0 ? s : 0.0;
        }
        for (int j = 0; j < m.h1; ++j) {
            if (d1[j] == 0) continue;
            double* gw = g.W1.data() + size_t(j) * m.n_features;
            for (int t = 0; t < m.n_features; ++t) gw[t] += d1[j] * x[t];
            g.b1[j] += d1[j];
        }
    }
    double inv = count ? 1.0 / double(count) : 0.0;
    auto scale = [&](std::vector<double>& v) {
        for (double& e : v) e *= inv;
    };
    scale(g.W1), scale(g.b1), scale(g.W2), scale(g.b2), scale(g.W3), scale(g.b3);
    for (size_t i = 0; i < g.W1.size(); ++i) g.W1[i] += l2 * m.W1[i];
    for (size_t i = 0; i < g.W2.size(); ++i) g.W2[i] += l2 * m.W2[i];
    for (size_t i = 0; i < g.W3.size(); ++i) g.W3[i] += l2 * m.W3[i];
    return g;
}

namespace detail {

inline void he_init(std::vector<double>& w, int fan_in, std::mt19937_64& rng) {
    double scale = std::sqrt(2.0 / std::max(1, fan_in));
    for (double& v : w) v = normal(rng) * scale;
}

inline void axpy(std::vector<double>& v, const std::vector<double>& g, double a) {
    for (size_t i = 0; i < v.size(); ++i) v[i] += a * g[i];
}

}  // namespace detail

inline MlpModel fit_mlp(const Dataset& train, const Hyperparams& hp, uint64_t seed) {
    const Matrix& X = train.X;
    int k = std::max(2, n_classes_of(train.y));

    MlpModel m;
    m.resize(static_cast<int>(X.cols), hp.hidden1, hp.hidden2, k);
    std::mt19937_64 rng(derive_seed(seed, 0x6d6c70));
    detail::he_init(m.W1, m.n_features, rng);
    detail::he_init(m.W2, m.h1, rng);
    detail::he_init(m.W3, m.h2, rng);
    if (X.rows == 0) return m;

    std::vector<int> order(X.rows);
    for (size_t i = 0; i < X.rows; ++i) order[i] = static_cast<int>(i);

    double lr = hp.learning_rate;
    double loss = mlp_loss(m, X, train.y, hp.l2);
    int stale = 0;
    for (int epoch = 0; epoch < hp.max_epochs && lr > 1e-12; ++epoch) {
        MlpModel checkpoint = m;
        fisher_yates(order, rng);
        size_t batch = std::max(1, hp.batch_size);
        std::vector<int> rows;
        for (size_t start = 0; start < order.size(); start += batch) {
            rows.assign(order.begin() + start,
                        order.begin() + std::min(order.size(), start + batch));
            MlpGradients g = mlp_gradients(m, X, train.y, hp.l2, &rows);
            detail::axpy(m.W1, g.W1, -lr);
            detail::axpy(m.b1, g.b1, -lr);
            detail::axpy(m.W2, g.W2, -lr);
            detail::axpy(m.b2, g.b2, -lr);
            detail::axpy(m.W3, g.W3, -lr);
            detail::axpy(m.b3, g.b3, -lr);
        }
        double new_loss = mlp_loss(m, X, train.y, hp.l2);
        if (new_loss > loss) {
            m = std::move(checkpoint);  // revert the whole epoch
            lr *= 0.5;
            continue;
        }
        double gain = loss - new_loss;
        loss = new_loss;
        stale = gain < hp.tol ? stale + 1 : 0;
        if (stale >= hp.patience) break;  // plateau
    }
    return m;
}

}  // namespace servepred
