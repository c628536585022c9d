// pipeline.hpp - end-to-end experiment: player selection, per-player/side
// dataset assembly, one 70/30 split per unit, training all configured
// models, and the accuracy/importance/distribution reports.
#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "servepred/features.hpp"
#include "servepred/mcp_data.hpp"
#include "servepred/models/model.hpp"
#include "servepred/rng.hpp"
#include "servepred/score_engine.hpp"

namespace servepred {

// Report column order mirrors the accuracy tables.
inline const std::vector<ModelKind>& report_model_order() {
    static const std::vector<ModelKind> order = {ModelKind::LR, ModelKind::RF,
                                                 ModelKind::DT, ModelKind::SVM,
                                                 ModelKind::NN};
    return order;
}

struct ExperimentConfig {
    std::string matches_path;
    std::string points_path;
    Sex tour = Sex::Unknown;  // Unknown = keep everything
    int min_matches = 30;
    double split_fraction = 0.70;
    uint64_t seed = 0;
    std::optional<int> window_games;
    std::vector<ModelKind> models = report_model_order();
    std::vector<std::string> players;  // explicit list wins over min_matches
    std::string out_dir;
    bool split_by_match = false;
    double replay_tolerance = 0.0;
    Hyperparams hp;
    ColumnConfig columns;
    int jobs = 0;  // 0 = hardware concurrency
};

struct AccuracyCell {
    std::string player;
    ServingSide side = ServingSide::Deuce;
    ModelKind model = ModelKind::LR;
    double accuracy = 0;
    int n_train = 0, n_test = 0;
};

struct AccuracyReport {
    std::vector<std::string> players;  // report row order
    std::vector<ModelKind> models;     // report column order
    std::vector<AccuracyCell> cells;

    const AccuracyCell* find(const std::string& player, ServingSide side,
                             ModelKind model) const {
        for (const auto& c : cells)
            if (c.player == player && c.side == side && c.model == model) return &c;
        return nullptr;
    }

    // mean over this player's models on one side
    std::optional<double> player_mean(const std::string& player, ServingSide side) const {
        double sum = 0;
        int n = 0;
        for (const auto& c : cells)
            if (c.player == player && c.side == side) sum += c.accuracy, ++n;
        if (!n) return std::nullopt;
        return sum / n;
    }

    // mean over players for one model on one side
    std::optional<double> model_mean(ModelKind model, ServingSide side) const {
        double sum = 0;
        int n = 0;
        for (const auto& c : cells)
            if (c.model == model && c.side == side) sum += c.accuracy, ++n;
        if (!n) return std::nullopt;
        return sum / n;
    }

    std::optional<double> grand_mean(ServingSide side) const {
        double sum = 0;
        int n = 0;
        for (const auto& c : cells)
            if (c.side == side) sum += c.accuracy, ++n;
        if (!n) return std::nullopt;
        return sum / n;
    }
};

struct ImportanceRow {
    std::string player;
    ServingSide side = ServingSide::Deuce;
    ModelKind model = ModelKind::DT;
    int rank = 0;
    std::string feature;
    double importance = 0;
};

struct DistributionRow {
    std::string player;
    ServingSide side = ServingSide::Deuce;
    double wide = 0, body = 0, t = 0;
    int n = 0;
};

struct ExperimentResult {
    AccuracyReport report;
    std::vector<ImportanceRow> importances;
    std::vector<DistributionRow> distributions;
    CleaningLog cleaning;
    std::vector<std::string> log;  // run log lines, deterministic order
};

// ---- player selection -------------------------------------------------------

inline std::vector<std::string> select_players(const std::vector<MatchRecord>& matches,
                                               int min_matches) {
    std::map<std::string, int> counts;
    for (const auto& m : matches) {
        counts[m.player1] += 1;
        counts[m.player2] += 1;
    }
    std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (const auto& [name, n] : ranked)
        if (n >= min_matches) out.push_back(name);
    return out;
}

// ---- splitting --------------------------------------------------------------

struct SplitIndices {
    std::vector<int> train, test;
};

// Uniform row split without replacement: floor(n * fraction) rows train,
// remainder test. Same seed, same split.
inline SplitIndices split_indices(size_t n, double fraction, uint64_t seed) {
    std::vector<int> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    std::mt19937_64 rng(derive_seed(seed, 0x73706c69));
    fisher_yates(idx, rng);
    size_t n_train = static_cast<size_t>(n * fraction);
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + n_train);
    s.test.assign(idx.begin() + n_train, idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

// Leakage-aware variant: whole matches are assigned to one side of the split.
inline SplitIndices split_indices_by_match(const std::vector<std::string>& row_match_ids,
                                           double fraction, uint64_t seed) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<int>> groups;
    for (size_t i = 0; i < row_match_ids.size(); ++i) {
        auto [it, inserted] = groups.try_emplace(row_match_ids[i]);
        if (inserted) order.push_back(row_match_ids[i]);
        it->second.push_back(static_cast<int>(i));
    }
    std::mt19937_64 rng(derive_seed(seed, 0x6d617463));
    fisher_yates(order, rng);
    size_t target = static_cast<size_t>(row_match_ids.size() * fraction);
    SplitIndices s;
    for (const auto& mid : order) {
        auto& dst = s.train.size() < target ? s.train : s.test;
        for (int i : groups[mid]) dst.push_back(i);
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

inline Dataset take_rows(const Dataset& d, const std::vector<int>& rows) {
    Dataset out;
    out.names = d.names;
    out.X = Matrix(rows.size(), d.X.cols);
    out.y.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        const double* src = d.X.row(rows[i]);
        std::copy(src, src + d.X.cols, out.X.row(i));
        out.y.push_back(d.y[rows[i]]);
        out.match_ids.push_back(d.match_ids[rows[i]]);
        out.point_indexes.push_back(d.point_indexes[rows[i]]);
    }
    return out;
}

inline std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double fraction,
                                                 uint64_t seed) {
    SplitIndices s = split_indices(d.size(), fraction, seed);
    return {take_rows(d, s.train), take_rows(d, s.test)};
}

// ---- data loading and per-player assembly -----------------------------------

struct LoadedData {
    std::vector<MatchRecord> matches;
    std::vector<PointRecord> points;  // sorted by (match_id, point_index)
    CleaningLog cleaning;
    std::vector<std::string> load_rejections;

    // points of one match as a span into the sorted vector
    std::span<const PointRecord> points_of(const std::string& match_id) const {
        auto lo = std::lower_bound(points.begin(), points.end(), match_id,
                                   [](const PointRecord& p, const std::string& id) {
                                       return p.match_id < id;
                                   });
        auto hi = lo;
        while (hi != points.end() && hi->match_id == match_id) ++hi;
        return {&*lo, static_cast<size_t>(hi - lo)};
    }
};

inline LoadedData load_and_clean(const ExperimentConfig& cfg) {
    std::vector<MatchRecord> matches = load_matches(cfg.matches_path, cfg.columns);
    if (cfg.tour != Sex::Unknown) {
        std::erase_if(matches, [&](const MatchRecord& m) {
            return m.sex != Sex::Unknown && m.sex != cfg.tour;
        });
    }
    PointLoadResult pts = load_points(cfg.points_path, cfg.columns);
    CleanResult cleaned = clean_dataset(std::move(matches), std::move(pts.points));
    LoadedData out;
    out.matches = std::move(cleaned.matches);
    out.points = std::move(cleaned.points);
    out.cleaning = cleaned.log;
    out.load_rejections = std::move(pts.rejected);
    return out;
}

struct PlayerRows {
    std::vector<FeatureVector> deuce, ad;
    std::vector<std::string> log;
    int matches_used = 0, matches_flagged = 0;
};

// All labelled first-serve rows of one player, split by serving side.
// Matches are walked in match_id order so output is deterministic.
inline PlayerRows collect_player_rows(const std::string& player, const LoadedData& data,
                                      const ExperimentConfig& cfg) {
    PlayerRows out;
    std::vector<const MatchRecord*> mine;
    for (const auto& m : data.matches)
        if (m.player1 == player || m.player2 == player) mine.push_back(&m);
    std::sort(mine.begin(), mine.end(), [](const MatchRecord* a, const MatchRecord* b) {
        return a->match_id < b->match_id;
    });

    ExtractOptions options{cfg.window_games};
    for (const MatchRecord* m : mine) {
        auto pts = data.points_of(m->match_id);
        std::vector<PointRecord> points(pts.begin(), pts.end());
        MatchFormat fmt{m->best_of, m->final_set_rules, 7, 7};
        ReplayResult rep;
        try {
            rep = replay(points, fmt, cfg.replay_tolerance);
        } catch (const ReplayDivergence& e) {
            out.log.push_back("match " + m->match_id + " flagged: " + e.what());
            ++out.matches_flagged;
            continue;
        }
        ++out.matches_used;
        int local = m->player1 == player ? 1 : 2;
        MatchFeatures mf = extract_features(*m, points, rep, options);
        for (auto& row : mf.rows) {
            if (row.server != local) continue;
            (row.side == ServingSide::Deuce ? out.deuce : out.ad).push_back(std::move(row));
        }
    }
    return out;
}

// ---- the experiment ---------------------------------------------------------

namespace detail {

struct UnitResult {
    std::vector<AccuracyCell> cells;
    std::vector<ImportanceRow> importances;
    std::optional<DistributionRow> distribution;
    std::vector<std::string> log;
};

inline UnitResult run_unit(const std::string& player, ServingSide side,
                           const std::vector<FeatureVector>& rows,
                           const ExperimentConfig& cfg) {
    UnitResult out;
    const char* side_name = side == ServingSide::Deuce ? "deuce" : "ad";

    if (!rows.empty()) {
        DistributionRow dist;
        dist.player = player;
        dist.side = side;
        dist.n = static_cast<int>(rows.size());
        for (const auto& r : rows) {
            if (r.label == ServeDirection::Wide) dist.wide += 1;
            else if (r.label == ServeDirection::Body) dist.body += 1;
            else dist.t += 1;
        }
        dist.wide /= dist.n;
        dist.body /= dist.n;
        dist.t /= dist.n;
        out.distribution = dist;
    }

    if (rows.size() < 10) {
        out.log.push_back("skipped " + player + " (" + side_name + "): only " +
                          std::to_string(rows.size()) + " labelled points");
        return out;
    }

    Dataset full = encode_dataset(rows);
    SplitIndices si = cfg.split_by_match
                          ? split_indices_by_match(full.match_ids, cfg.split_fraction,
                                                   cfg.seed)
                          : split_indices(full.size(), cfg.split_fraction, cfg.seed);
    Dataset train = take_rows(full, si.train);
    Dataset test = take_rows(full, si.test);
    if (train.size() == 0 || test.size() == 0) {
        out.log.push_back("skipped " + player + " (" + side_name +
                          "): degenerate train/test split");
        return out;
    }

    Standardizer st = Standardizer::fit(train.X);
    Dataset train_std = train, test_std = test;
    train_std.X = st.transform(train.X);
    test_std.X = st.transform(test.X);

    for (ModelKind kind : cfg.models) {
        bool standardized = kind == ModelKind::LR || kind == ModelKind::SVM ||
                            kind == ModelKind::NN;
        const Dataset& tr = standardized ? train_std : train;
        const Dataset& te = standardized ? test_std : test;
        TrainedModel model = train_model(kind, tr, cfg.hp, cfg.seed);
        if (model.degenerate())
            out.log.push_back(std::string("degenerate ") + to_string(kind) + " for " +
                              player + " (" + side_name + "): single-class training set");
        std::vector<int> pred = predict(model, te.X);
        AccuracyCell cell;
        cell.player = player;
        cell.side = side;
        cell.model = kind;
        cell.accuracy = accuracy(pred, te.y);
        cell.n_train = static_cast<int>(tr.size());
        cell.n_test = static_cast<int>(te.size());
        out.cells.push_back(cell);

        if (kind == ModelKind::DT || kind == ModelKind::RF) {
            auto ranked = feature_importance(model, tr.names);
            for (size_t r = 0; r < ranked.size(); ++r) {
                ImportanceRow row;
                row.player = player;
                row.side = side;
                row.model = kind;
                row.rank = static_cast<int>(r + 1);
                row.feature = ranked[r].first;
                row.importance = ranked[r].second;
                out.importances.push_back(row);
            }
        }
    }
    return out;
}

}  // namespace detail

inline ExperimentResult run_experiment_on(const LoadedData& data,
                                          const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.cleaning = data.cleaning;
    for (const auto& r : data.load_rejections) result.log.push_back("load: " + r);

    std::vector<std::string> players =
        cfg.players.empty() ? select_players(data.matches, cfg.min_matches) : cfg.players;
    result.report.players = players;
    result.report.models = cfg.models;

    struct PlayerOutput {
        std::vector<std::string> log;
        detail::UnitResult deuce, ad;
    };

    auto run_player = [&](const std::string& player) {
        PlayerOutput po;
        PlayerRows rows = collect_player_rows(player, data, cfg);
        po.log = rows.log;
        po.log.push_back(player + ": " + std::to_string(rows.matches_used) +
                         " matches used, " + std::to_string(rows.matches_flagged) +
                         " flagged, " + std::to_string(rows.deuce.size()) +
                         " deuce rows, " + std::to_string(rows.ad.size()) + " ad rows");
        try {
            po.deuce = detail::run_unit(player, ServingSide::Deuce, rows.deuce, cfg);
        } catch (const std::exception& e) {
            po.log.push_back("error " + player + " (deuce): " + e.what());
        }
        try {
            po.ad = detail::run_unit(player, ServingSide::Ad, rows.ad, cfg);
        } catch (const std::exception& e) {
            po.log.push_back("error " + player + " (ad): " + e.what());
        }
        return po;
    };

    unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
    std::vector<PlayerOutput> outputs(players.size());
    for (size_t base = 0; base < players.size(); base += jobs) {
        size_t end = std::min(players.size(), base + jobs);
        std::vector<std::future<PlayerOutput>> batch;
        for (size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_player, players[i]));
        for (size_t i = base; i < end; ++i) outputs[i] = batch[i - base].get();
    }

    for (const auto& po : outputs) {
        for (const auto& line : po.log) result.log.push_back(line);
        for (const auto* unit : {&po.deuce, &po.ad}) {
            for (const auto& line : unit->log) result.log.push_back(line);
            for (const auto& c : unit->cells) result.report.cells.push_back(c);
            for (const auto& r : unit->importances) result.importances.push_back(r);
            if (unit->distribution) result.distributions.push_back(*unit->distribution);
        }
    }
    return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    return run_experiment_on(load_and_clean(cfg), cfg);
}

}  // namespace servepred
