// dataset.hpp - encoded feature matrices, standardization, accuracy
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "servepred/errors.hpp"
#include "servepred/features.hpp"

namespace servepred {

struct Matrix {
    std::vector<double> data;  // row-major
    size_t rows = 0, cols = 0;

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : data(r * c, fill), rows(r), cols(c) {}

    double* row(size_t i) { return data.data() + i * cols; }
    const double* row(size_t i) const { return data.data() + i * cols; }
    double& at(size_t i, size_t j) { return data[i * cols + j]; }
    double at(size_t i, size_t j) const { return data[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

// Class encoding order fixes tie-breaking: wide < body < t.
inline const std::array<std::string, 3>& class_names() {
    static const std::array<std::string, 3> names = {"wide", "body", "t"};
    return names;
}

inline const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "count_wide", "count_body", "count_t",
        "win_wide", "win_body", "win_t",
        "pct_wide", "pct_body", "pct_t",
        "prev_winner_server", "prev_winner_returner", "prev_winner_none",
        "run_index_server", "run_index_returner",
        "anxiety_game", "anxiety_set", "anxiety_match", "anxiety_overall",
        "surface_hard", "surface_clay", "surface_grass", "surface_carpet",
        "surface_unknown",
        "opp_hand_left", "opp_hand_right", "opp_hand_unknown",
    };
    return names;
}

struct Dataset {
    Matrix X;
    std::vector<int> y;  // 0 wide, 1 body, 2 t
    std::vector<std::string> names;
    // row provenance, for CSV export and debugging
    std::vector<std::string> match_ids;
    std::vector<int> point_indexes;

    size_t size() const { return X.rows; }
};

inline void encode_row(const FeatureVector& fv, double* out) {
    out[0] = fv.counts_by_dir.wide;
    out[1] = fv.counts_by_dir.body;
    out[2] = fv.counts_by_dir.t;
    out[3] = fv.wins_by_dir.wide;
    out[4] = fv.wins_by_dir.body;
    out[5] = fv.wins_by_dir.t;
    out[6] = fv.serve_pct_by_dir[0];
    out[7] = fv.serve_pct_by_dir[1];
    out[8] = fv.serve_pct_by_dir[2];
    out[9] = fv.prev_point_winner == PrevPointWinner::Server ? 1.0 : 0.0;
    out[10] = fv.prev_point_winner == PrevPointWinner::Returner ? 1.0 : 0.0;
    out[11] = fv.prev_point_winner == PrevPointWinner::None ? 1.0 : 0.0;
    out[12] = fv.run_index_server;
    out[13] = fv.run_index_returner;
    out[14] = fv.anxiety_game;
    out[15] = fv.anxiety_set;
    out[16] = fv.anxiety_match;
    out[17] = fv.anxiety_overall;
    out[18] = fv.surface == Surface::Hard ? 1.0 : 0.0;
    out[19] = fv.surface == Surface::Clay ? 1.0 : 0.0;
    out[20] = fv.surface == Surface::Grass ? 1.0 : 0.0;
    out[21] = fv.surface == Surface::Carpet ? 1.0 : 0.0;
    out[22] = fv.surface == Surface::Unknown ? 1.0 : 0.0;
    out[23] = fv.opponent_hand == Handedness::Left ? 1.0 : 0.0;
    out[24] = fv.opponent_hand == Handedness::Right ? 1.0 : 0.0;
    out[25] = fv.opponent_hand == Handedness::Unknown ? 1.0 : 0.0;
}

inline Dataset encode_dataset(std::span<const FeatureVector> rows) {
    Dataset d;
    d.names = feature_names();
    d.X = Matrix(rows.size(), d.names.size());
    d.y.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        encode_row(rows[i], d.X.row(i));
        d.y.push_back(static_cast<int>(rows[i].label));
        d.match_ids.push_back(rows[i].match_id);
        d.point_indexes.push_back(rows[i].point_index);
    }
    return d;
}

// Per-column mean/stdev fitted on training rows only.
struct Standardizer {
    std::vector<double> mean, stdev;

    static Standardizer fit(const Matrix& X) {
        Standardizer s;
        s.mean.assign(X.cols, 0.0);
        s.stdev.assign(X.cols, 1.0);
        if (X.rows == 0) return s;
        for (size_t i = 0; i < X.rows; ++i)
            for (size_t j = 0; j < X.cols; ++j) s.mean[j] += X.at(i, j);
        for (size_t j = 0; j < X.cols; ++j) s.mean[j] /= double(X.rows);
        std::vector<double> var(X.cols, 0.0);
        for (size_t i = 0; i < X.rows; ++i)
            for (size_t j = 0; j < X.cols; ++j) {
                double d = X.at(i, j) - s.mean[j];
                var[j] += d * d;
            }
        for (size_t j = 0; j < X.cols; ++j) {
            double sd = std::sqrt(var[j] / double(X.rows));
            s.stdev[j] = sd > 0 ? sd : 1.0;  // constant columns pass through
        }
        return s;
    }

    Matrix transform(const Matrix& X) const {
        Matrix out = X;
        for (size_t i = 0; i < out.rows; ++i)
            for (size_t j = 0; j < out.cols; ++j)
                out.at(i, j) = (out.at(i, j) - mean[j]) / stdev[j];
        return out;
    }
};

inline double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size())
        throw ShapeError("accuracy: label vectors differ in length");
    if (predicted.empty()) throw UndefinedMetric("accuracy of empty label set");
    size_t hits = 0;
    for (size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace servepred
