// features.hpp - per-point predictor vector for a server's first serves
//
// All cumulative quantities run from the beginning of the match to the
// previous point, never including the point being predicted.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "servepred/court_geometry.hpp"
#include "servepred/mcp_data.hpp"
#include "servepred/notation.hpp"
#include "servepred/score_engine.hpp"

namespace servepred {

struct DirectionCounts {
    int wide = 0, body = 0, t = 0;

    int& by(ServeDirection d) {
        switch (d) {
            case ServeDirection::Wide: return wide;
            case ServeDirection::Body: return body;
            default: return t;
        }
    }
    int by(ServeDirection d) const {
        switch (d) {
            case ServeDirection::Wide: return wide;
            case ServeDirection::Body: return body;
            default: return t;
        }
    }
    bool operator==(const DirectionCounts&) const = default;
};

enum class PrevPointWinner { Server, Returner, None };

struct AnxietyComponents {
    Level level = Level::Game;
    double uncertainty = 0, hope = 0, fear = 0;
    double anxiety = 0;  // uncertainty * (hope + fear)
};

struct FeatureVector {
    DirectionCounts counts_by_dir;  // first-serve attempts, faults included
    DirectionCounts wins_by_dir;    // first serve in and point won
    std::array<double, 3> serve_pct_by_dir{0, 0, 0};
    PrevPointWinner prev_point_winner = PrevPointWinner::None;
    double run_index_server = 0;
    double run_index_returner = 0;
    double anxiety_game = 0, anxiety_set = 0, anxiety_match = 0;
    double anxiety_overall = 0;
    Surface surface = Surface::Unknown;
    Handedness opponent_hand = Handedness::Unknown;
    ServeDirection label = ServeDirection::Unknown;

    // row identity
    std::string match_id;
    int point_index = 0;
    ServingSide side = ServingSide::Deuce;
    int server = 0;
};

// One prior first serve of a server, as seen by the cumulative features.
struct ServeOutcome {
    ServeDirection direction = ServeDirection::Unknown;
    bool in = false;          // landed in play
    bool server_won = false;  // server won the point
    int service_game = 0;     // ordinal of the server's service game (1-based)
};

inline DirectionCounts direction_counts(std::span<const ServeOutcome> prior) {
    DirectionCounts c;
    for (const auto& s : prior)
        if (s.direction != ServeDirection::Unknown) c.by(s.direction) += 1;
    return c;
}

inline DirectionCounts win_counts(std::span<const ServeOutcome> prior) {
    DirectionCounts c;
    for (const auto& s : prior)
        if (s.direction != ServeDirection::Unknown && s.in && s.server_won)
            c.by(s.direction) += 1;
    return c;
}

inline std::array<double, 3> serve_percentages(std::span<const ServeOutcome> prior) {
    DirectionCounts attempts = direction_counts(prior);
    DirectionCounts in;
    for (const auto& s : prior)
        if (s.direction != ServeDirection::Unknown && s.in) in.by(s.direction) += 1;
    auto pct = [](int num, int den) { return den == 0 ? 0.0 : double(num) / den; };
    return {pct(in.wide, attempts.wide), pct(in.body, attempts.body), pct(in.t, attempts.t)};
}

// Run of a point attributed to players 1/2 rather than server/returner.
struct PointRun {
    int server = 0;
    RunPair runs;
};

inline double cumulative_run_index(std::span<const PointRun> prior, int player) {
    double total = 0;
    for (const auto& pr : prior)
        total += pr.server == player ? pr.runs.server : pr.runs.returner;
    return total;
}

inline AnxietyComponents anxiety(const ScoreState& state, int player, Level level) {
    LevelDistances d = distances(state, player, level);
    auto clamp01 = [](double v) { return v < 0 ? 0.0 : (v > 1 ? 1.0 : v); };
    AnxietyComponents a;
    a.level = level;
    double target = static_cast<double>(d.target);
    a.uncertainty = clamp01(1.0 - std::abs(d.own_score - d.opp_score) / target);
    a.hope = clamp01(d.own_score / target);
    a.fear = clamp01(d.opp_score / target);
    a.anxiety = a.uncertainty * (a.hope + a.fear);
    return a;
}

inline double overall_anxiety(const AnxietyComponents& game, const AnxietyComponents& set,
                              const AnxietyComponents& match) {
    return game.anxiety + set.anxiety + match.anxiety;
}

struct ExtractOptions {
    // When set, the three cumulative serve features only look back this many
    // of the server's service games (including the current one).
    std::optional<int> window_games;
};

struct MatchFeatures {
    std::vector<FeatureVector> rows;  // one per labelled first-serve point
    int points_seen = 0;
    int label_skipped = 0;  // first-serve direction unknown
};

namespace detail {

struct ParsedPoint {
    ServePlacement first_serve;  // direction Unknown when the token is bad
    std::optional<ServePlacement> second_serve;
    RallyParse rally;
};

inline ParsedPoint parse_point(const PointRecord& pt) {
    ParsedPoint pp;
    try {
        pp.first_serve = parse_serve(pt.first_serve_code);
    } catch (const ParseError&) {
        pp.first_serve = ServePlacement{ServeDirection::Unknown, ServeFault::Unknown, false};
    }
    if (!pt.second_serve_code.empty()) {
        try {
            pp.second_serve = parse_serve(pt.second_serve_code);
        } catch (const ParseError&) {
            pp.second_serve =
                ServePlacement{ServeDirection::Unknown, ServeFault::Unknown, false};
        }
    }
    pp.rally = parse_rally(pt.rally_code);
    return pp;
}

// Slice of a server's prior serves restricted to the last K service games.
inline std::span<const ServeOutcome> window_slice(const std::vector<ServeOutcome>& all,
                                                  std::optional<int> window,
                                                  int current_game) {
    if (!window) return {all.data(), all.size()};
    int cutoff = current_game - *window;  // keep service_game > cutoff
    size_t lo = 0;
    while (lo < all.size() && all[lo].service_game <= cutoff) ++lo;
    return {all.data() + lo, all.size() - lo};
}

}  // namespace detail

// Walks a replayed match once and emits the feature vector for every
// labelled first-serve point. Cumulative state never includes the point
// being emitted.
inline MatchFeatures extract_features(const MatchRecord& match,
                                      const std::vector<PointRecord>& points,
                                      const ReplayResult& replay,
                                      const ExtractOptions& options = {}) {
    MatchFeatures out;
    std::vector<ServeOutcome> serves[2];   // indexed by player-1
    std::vector<PointRun> runs;
    runs.reserve(points.size());
    int prev_winner = 0;  // 0 = no previous point
    // service-game ordinals per player
    long last_game_key[2] = {-1, -1};
    int game_ordinal[2] = {0, 0};

    for (size_t i = 0; i < points.size() && i < replay.pre_states.size(); ++i) {
        const PointRecord& pt = points[i];
        const ScoreState& state = replay.pre_states[i];
        const int srv = state.server();
        const int ret = state.returner();
        const ServingSide side = serving_side(state);
        detail::ParsedPoint pp = detail::parse_point(pt);
        ++out.points_seen;

        long game_key = ((long)(state.sets[0] * 64 + state.sets[1]) << 32) |
                        (long)(state.games[0] * 1024 + state.games[1]) << 2 |
                        (state.in_tiebreak ? 1 : 0);
        if (game_key != last_game_key[srv - 1]) {
            last_game_key[srv - 1] = game_key;
            game_ordinal[srv - 1] += 1;
        }

        if (pp.first_serve.direction != ServeDirection::Unknown) {
            FeatureVector fv;
            auto prior = detail::window_slice(serves[srv - 1], options.window_games,
                                              game_ordinal[srv - 1]);
            fv.counts_by_dir = direction_counts(prior);
            fv.wins_by_dir = win_counts(prior);
            fv.serve_pct_by_dir = serve_percentages(prior);
            fv.prev_point_winner = prev_winner == 0 ? PrevPointWinner::None
                                 : prev_winner == srv ? PrevPointWinner::Server
                                                      : PrevPointWinner::Returner;
            fv.run_index_server = cumulative_run_index(runs, srv);
            fv.run_index_returner = cumulative_run_index(runs, ret);
            AnxietyComponents ag = anxiety(state, srv, Level::Game);
            AnxietyComponents as = anxiety(state, srv, Level::Set);
            AnxietyComponents am = anxiety(state, srv, Level::Match);
            fv.anxiety_game = ag.anxiety;
            fv.anxiety_set = as.anxiety;
            fv.anxiety_match = am.anxiety;
            fv.anxiety_overall = overall_anxiety(ag, as, am);
            fv.surface = match.surface;
            fv.opponent_hand = ret == 1 ? match.handedness1 : match.handedness2;
            fv.label = pp.first_serve.direction;
            fv.match_id = pt.match_id;
            fv.point_index = pt.point_index;
            fv.side = side;
            fv.server = srv;
            out.rows.push_back(std::move(fv));
        } else {
            ++out.label_skipped;
        }

        // fold this point into the cumulative state
        ServeOutcome so;
        so.direction = pp.first_serve.direction;
        so.in = pp.first_serve.fault == ServeFault::In;
        so.server_won = pt.point_winner == srv;
        so.service_game = game_ordinal[srv - 1];
        serves[srv - 1].push_back(so);

        const ServePlacement& in_play =
            pp.second_serve ? *pp.second_serve : pp.first_serve;
        runs.push_back({srv, run_index_point(in_play, pp.rally.shots, side)});
        prev_winner = pt.point_winner;
    }
    return out;
}

// Features of one point, or nullopt when its first-serve direction is
// unknown (the label would be undefined).
inline std::optional<FeatureVector> build_feature_vector(
    const MatchRecord& match, const std::vector<PointRecord>& points,
    const ReplayResult& replay, int point_index, const ExtractOptions& options = {}) {
    std::vector<PointRecord> prefix;
    std::vector<ScoreState> states;
    for (size_t i = 0; i < points.size() && i < replay.pre_states.size(); ++i) {
        prefix.push_back(points[i]);
        states.push_back(replay.pre_states[i]);
        if (points[i].point_index == point_index) break;
    }
    ReplayResult sub;
    sub.pre_states = std::move(states);
    MatchFeatures mf = extract_features(match, prefix, sub, options);
    for (auto& row : mf.rows)
        if (row.point_index == point_index) return row;
    return std::nullopt;
}

}  // namespace servepred
