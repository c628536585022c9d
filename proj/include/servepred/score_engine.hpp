// score_engine.hpp - immutable tennis score state machine and match replay
//
// Points inside a game are kept as an integer ladder (0,1,2,3,...); the
// 0/15/30/40/Ad names are display-only. Games use advantage scoring, sets go
// to 6 with a margin of 2 or 7-6 via tiebreak, tiebreaks to 7 (configurable)
// with a margin of 2. The final set plays a tiebreak or advantage games
// depending on the match format.
#pragma once

#include <algorithm>
#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "servepred/errors.hpp"
#include "servepred/mcp_data.hpp"

namespace servepred {

enum class ServingSide { Deuce, Ad };
enum class Level { Game, Set, Match };

struct MatchFormat {
    int best_of = 3;  // 3 or 5
    FinalSetRules final_set_rules = FinalSetRules::Tiebreak;
    int tiebreak_to = 7;
    int final_set_tiebreak_to = 7;  // 10 for extended deciders
};

struct ScoreState {
    std::array<int, 2> points{0, 0};
    std::array<int, 2> games{0, 0};
    std::array<int, 2> sets{0, 0};
    std::array<int, 2> tiebreak_points{0, 0};
    int game_server = 1;           // who serves (first) in the current game
    int tiebreak_first_server = 0;  // 0 when not in a tiebreak
    bool in_tiebreak = false;
    bool finished = false;
    int winner = 0;  // 0 while unfinished
    MatchFormat format;

    int sets_to_win() const { return format.best_of / 2 + 1; }
    bool is_final_set() const {
        return sets[0] == sets_to_win() - 1 && sets[1] == sets_to_win() - 1;
    }
    bool final_set_has_tiebreak() const {
        return !is_final_set() || format.final_set_rules == FinalSetRules::Tiebreak;
    }
    int tiebreak_target() const {
        return is_final_set() ? format.final_set_tiebreak_to : format.tiebreak_to;
    }

    // Server of the next point; inside a tiebreak serve rotates 1 point,
    // then pairs.
    int server() const {
        if (!in_tiebreak) return game_server;
        int played = tiebreak_points[0] + tiebreak_points[1];
        bool rotated = ((played + 1) / 2) % 2 == 1;
        return rotated ? 3 - tiebreak_first_server : tiebreak_first_server;
    }
    int returner() const { return 3 - server(); }

    bool operator==(const ScoreState& o) const {
        return points == o.points && games == o.games && sets == o.sets &&
               tiebreak_points == o.tiebreak_points && game_server == o.game_server &&
               in_tiebreak == o.in_tiebreak && finished == o.finished && winner == o.winner;
    }
};

inline ScoreState new_match(int server_first, MatchFormat format = {}) {
    ScoreState s;
    s.game_server = server_first;
    s.format = format;
    return s;
}

inline ServingSide serving_side(const ScoreState& s) {
    int played = s.in_tiebreak ? s.tiebreak_points[0] + s.tiebreak_points[1]
                               : s.points[0] + s.points[1];
    return played % 2 == 0 ? ServingSide::Deuce : ServingSide::Ad;
}

namespace detail {

inline void win_set(ScoreState& s, int w) {
    s.sets[w] += 1;
    s.games = {0, 0};
    s.points = {0, 0};
    if (s.sets[w] == s.sets_to_win()) {
        s.finished = true;
        s.winner = w + 1;
    }
}

}  // namespace detail

inline ScoreState apply_point(const ScoreState& state, int point_winner) {
    if (state.finished) throw StateError("apply_point on a finished match");
    if (point_winner != 1 && point_winner != 2)
        throw StateError("point winner must be player 1 or 2");

    ScoreState s = state;
    int w = point_winner - 1, l = 1 - w;

    if (s.in_tiebreak) {
        s.tiebreak_points[w] += 1;
        int target = s.tiebreak_target();
        if (s.tiebreak_points[w] >= target &&
            s.tiebreak_points[w] - s.tiebreak_points[l] >= 2) {
            s.games[w] += 1;  // 7-6
            // loser of the toss-equivalent: whoever received first in the
            // tiebreak serves the next set
            s.game_server = 3 - s.tiebreak_first_server;
            s.in_tiebreak = false;
            s.tiebreak_first_server = 0;
            s.tiebreak_points = {0, 0};
            detail::win_set(s, w);
        }
        return s;
    }

    s.points[w] += 1;
    if (s.points[w] >= 4 && s.points[w] - s.points[l] >= 2) {
        s.games[w] += 1;
        s.points = {0, 0};
        s.game_server = 3 - s.game_server;
        if (s.games[w] >= 6 && s.games[w] - s.games[l] >= 2) {
            detail::win_set(s, w);
        } else if (s.games[0] == 6 && s.games[1] == 6 && s.final_set_has_tiebreak()) {
            s.in_tiebreak = true;
            s.tiebreak_first_server = s.game_server;
            s.tiebreak_points = {0, 0};
        }
    }
    return s;
}

struct LevelDistances {
    Level level = Level::Game;
    int own_score = 0;
    int opp_score = 0;
    int target = 0;  // score needed to win this level from here
};

inline LevelDistances distances(const ScoreState& s, int player, Level level) {
    int p = player - 1, o = 1 - p;
    LevelDistances d;
    d.level = level;
    switch (level) {
        case Level::Game:
            if (s.in_tiebreak) {
                d.own_score = s.tiebreak_points[p];
                d.opp_score = s.tiebreak_points[o];
                d.target = std::max(s.tiebreak_target(),
                                    std::min(d.own_score, d.opp_score) + 2);
            } else {
                d.own_score = s.points[p];
                d.opp_score = s.points[o];
                d.target = std::max(4, std::min(d.own_score, d.opp_score) + 2);
            }
            break;
        case Level::Set:
            d.own_score = s.games[p];
            d.opp_score = s.games[o];
            d.target = std::max(6, d.opp_score + 2);
            if (s.final_set_has_tiebreak()) d.target = std::min(d.target, 7);
            break;
        case Level::Match:
            d.own_score = s.sets[p];
            d.opp_score = s.sets[o];
            d.target = s.sets_to_win();
            break;
    }
    return d;
}

struct ReplayResult {
    std::vector<ScoreState> pre_states;  // state before each point, aligned
    int server_mismatches = 0;
    int checked_points = 0;
};

// Replays charted points through the engine. The charted winner is trusted;
// the charted server is cross-checked against the engine-derived one. Throws
// ReplayDivergence when the mismatch fraction exceeds the tolerance or the
// charted points continue past the end of the match.
inline ReplayResult replay(const std::vector<PointRecord>& points, MatchFormat format,
                           double server_tolerance = 0.0) {
    ReplayResult out;
    if (points.empty()) return out;

    const std::string& mid = points.front().match_id;
    int first_server = points.front().server;
    if (first_server != 1 && first_server != 2)
        throw ReplayDivergence(mid, static_cast<int>(points.size()),
                               static_cast<int>(points.size()));

    ScoreState s = new_match(first_server, format);
    out.pre_states.reserve(points.size());
    for (const auto& pt : points) {
        if (s.finished)
            throw ReplayDivergence(mid, static_cast<int>(points.size()),
                                   static_cast<int>(points.size()));
        out.pre_states.push_back(s);
        if (pt.server == 1 || pt.server == 2) {
            ++out.checked_points;
            if (pt.server != s.server()) ++out.server_mismatches;
        }
        s = apply_point(s, pt.point_winner);
    }
    double fraction = static_cast<double>(out.server_mismatches) /
                      static_cast<double>(points.size());
    if (out.server_mismatches > 0 && fraction > server_tolerance)
        throw ReplayDivergence(mid, out.server_mismatches,
                               static_cast<int>(points.size()));
    return out;
}

// 0/15/30/40/Ad display for the integer point ladder.
inline std::string game_score_text(const ScoreState& s) {
    if (s.in_tiebreak) {
        return std::to_string(s.tiebreak_points[0]) + "-" +
               std::to_string(s.tiebreak_points[1]) + " (TB)";
    }
    static const char* names[] = {"0", "15", "30", "40"};
    int a = s.points[0], b = s.points[1];
    if (a >= 3 && b >= 3) {
        if (a == b) return "40-40";
        return a > b ? "Ad-40" : "40-Ad";
    }
    return std::string(names[std::min(a, 3)]) + "-" + names[std::min(b, 3)];
}

inline std::string replay_trace(const std::vector<PointRecord>& points,
                                MatchFormat format, double server_tolerance = 0.0) {
    ReplayResult r = replay(points, format, server_tolerance);
    std::ostringstream os;
    for (size_t i = 0; i < points.size(); ++i) {
        const ScoreState& s = r.pre_states[i];
        os << "pt " << points[i].point_index << " | sets " << s.sets[0] << "-" << s.sets[1]
           << " games " << s.games[0] << "-" << s.games[1] << " | " << game_score_text(s)
           << " | svr " << s.server()
           << (serving_side(s) == ServingSide::Deuce ? " (deuce)" : " (ad)")
           << " | won by " << points[i].point_winner << "\n";
    }
    return os.str();
}

}  // namespace servepred
