// synthetic.hpp - test-only generators: charted-match corpora in MCP layout
// and a multinomial-logistic labelled dataset over the real feature schema.
#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "servepred/servepred.hpp"

namespace synth {

using namespace servepred;

struct PlayerProfile {
    std::string name;
    Handedness hand = Handedness::Right;
    std::array<double, 3> mix_deuce{1 / 3.0, 1 / 3.0, 1 / 3.0};  // wide/body/t
    std::array<double, 3> mix_ad{1 / 3.0, 1 / 3.0, 1 / 3.0};
    double first_in = 0.62;
    double win_if_first_in = 0.70;
    double win_otherwise = 0.52;
};

struct Corpus {
    std::vector<MatchRecord> matches;
    std::vector<PointRecord> points;
};

namespace detail {

inline int draw_mix(const std::array<double, 3>& mix, std::mt19937_64& rng) {
    double u = uniform_unit(rng);
    if (u < mix[0]) return 0;
    if (u < mix[0] + mix[1]) return 1;
    return 2;
}

inline char direction_digit(int dir) { return dir == 0 ? '4' : dir == 1 ? '5' : '6'; }

inline std::string random_rally(std::mt19937_64& rng, bool server_won) {
    static const char* kinds = "fbrsvl";
    int shots = static_cast<int>(uniform_below(rng, 7));
    std::string out;
    for (int i = 0; i < shots; ++i) {
        out.push_back(kinds[uniform_below(rng, 6)]);
        out.push_back(static_cast<char>('1' + uniform_below(rng, 3)));
        if (uniform_below(rng, 3) == 0)
            out.push_back(uniform_below(rng, 2) == 0 ? '7' : '8');
    }
    if (!out.empty()) {
        // terminal: winner when the last hitter took the point, else an error
        bool last_by_returner = shots % 2 == 1;
        bool winner_shot = last_by_returner != server_won;
        out.push_back(winner_shot ? '*' : '@');
    }
    return out;
}

}  // namespace detail

// Simulates one charted match through the score engine, emitting MCP-style
// raw point strings that exercise the notation parser end to end.
inline void simulate_match(const PlayerProfile& p1, const PlayerProfile& p2,
                           const std::string& match_id, Surface surface, Sex sex,
                           int best_of, std::mt19937_64& rng, Corpus& out,
                           int max_points = 2000) {
    MatchRecord m;
    m.match_id = match_id;
    m.player1 = p1.name;
    m.player2 = p2.name;
    m.handedness1 = p1.hand;
    m.handedness2 = p2.hand;
    m.surface = surface;
    m.sex = sex;
    m.best_of = best_of;
    m.final_set_rules = FinalSetRules::Tiebreak;
    out.matches.push_back(m);

    ScoreState s = new_match(1 + static_cast<int>(uniform_below(rng, 2)),
                             MatchFormat{best_of, FinalSetRules::Tiebreak, 7, 7});
    int pt = 0;
    while (!s.finished && pt < max_points) {
        ++pt;
        const PlayerProfile& server = s.server() == 1 ? p1 : p2;
        const auto& mix = serving_side(s) == ServingSide::Deuce ? server.mix_deuce
                                                                : server.mix_ad;
        int dir = detail::draw_mix(mix, rng);
        bool in = uniform_unit(rng) < server.first_in;
        bool server_won;
        std::string first, second;
        if (in) {
            server_won = uniform_unit(rng) < server.win_if_first_in;
            std::string rally = detail::random_rally(rng, server_won);
            first.push_back(detail::direction_digit(dir));
            if (rally.empty() && server_won) first.push_back('*');  // ace
            first += rally;
        } else {
            first.push_back(detail::direction_digit(dir));
            first.push_back("nwd"[uniform_below(rng, 3)]);
            int dir2 = detail::draw_mix(mix, rng);
            bool in2 = uniform_unit(rng) < 0.9;
            second.push_back(detail::direction_digit(dir2));
            if (!in2) {
                second.push_back('n');
                server_won = false;  // double fault
            } else {
                server_won = uniform_unit(rng) < server.win_otherwise;
                second += detail::random_rally(rng, server_won);
            }
        }
        PointRecord rec;
        rec.match_id = match_id;
        rec.point_index = pt;
        rec.server = s.server();
        rec.point_winner = server_won ? s.server() : s.returner();
        rec.is_tiebreak_point = s.in_tiebreak;
        auto [code1, tail1] = split_point_code(first);
        rec.first_serve_code = code1;
        if (!second.empty()) {
            auto [code2, tail2] = split_point_code(second);
            rec.second_serve_code = code2;
            rec.rally_code = tail2;
        } else {
            rec.rally_code = tail1;
        }
        out.points.push_back(rec);
        s = apply_point(s, rec.point_winner);
    }
}

inline Corpus make_corpus(const std::vector<PlayerProfile>& players, int matches_per_pair,
                          uint64_t seed, Sex sex = Sex::M, int best_of = 3) {
    Corpus c;
    std::mt19937_64 rng(seed);
    static const Surface surfaces[] = {Surface::Hard, Surface::Clay, Surface::Grass};
    int id = 0;
    for (size_t i = 0; i < players.size(); ++i) {
        for (size_t j = i + 1; j < players.size(); ++j) {
            for (int k = 0; k < matches_per_pair; ++k) {
                ++id;
                char buf[32];
                std::snprintf(buf, sizeof buf, "%05d", id);
                simulate_match(players[i], players[j],
                               "2023" + std::string(buf) + "-synth", surfaces[id % 3],
                               sex, best_of, rng, c);
            }
        }
    }
    return c;
}

// Writes a corpus as a pair of MCP-layout CSV files; raw point strings are
// reassembled from the split tokens.
inline void write_corpus_csv(const Corpus& c, const std::string& matches_path,
                             const std::string& points_path) {
    {
        std::ofstream os(matches_path, std::ios::binary);
        write_csv_row(os, {"match_id", "Player 1", "Player 2", "Pl 1 hand", "Pl 2 hand",
                           "Gender", "Date", "Tournament", "Surface", "Best of",
                           "Final TB?"});
        for (const auto& m : c.matches) {
            auto hand = [](Handedness h) {
                return h == Handedness::Right ? "R" : h == Handedness::Left ? "L" : "";
            };
            write_csv_row(os, {m.match_id, m.player1, m.player2, hand(m.handedness1),
                               hand(m.handedness2), m.sex == Sex::M ? "M" : "W",
                               "20230101", "Synth Open", to_string(m.surface),
                               std::to_string(m.best_of),
                               m.final_set_rules == FinalSetRules::Tiebreak ? "1" : "0"});
        }
    }
    {
        std::ofstream os(points_path, std::ios::binary);
        write_csv_row(os, {"match_id", "Pt", "Svr", "1st", "2nd", "PtWinner", "TB?"});
        for (const auto& p : c.points) {
            std::string first = p.first_serve_code;
            std::string second = p.second_serve_code;
            if (second.empty())
                first += p.rally_code;
            else
                second += p.rally_code;
            write_csv_row(os, {p.match_id, std::to_string(p.point_index),
                               std::to_string(p.server), first, second,
                               std::to_string(p.point_winner),
                               p.is_tiebreak_point ? "1" : "0"});
        }
    }
}

// ---- labelled dataset drawn from a known multinomial-logistic model ----------

struct LogisticTruth {
    Matrix W;  // 3 x n_features
    std::vector<double> b;
    double bayes_accuracy = 0;  // mean max class probability over the sample
};

// Plausible random rows over the real feature schema (valid one-hots, counts,
// percentages and anxiety ranges).
inline std::vector<FeatureVector> random_feature_rows(size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<FeatureVector> rows(n);
    for (auto& fv : rows) {
        auto count = [&](int hi) { return static_cast<int>(uniform_below(rng, hi)); };
        fv.counts_by_dir = {count(30), count(20), count(30)};
        fv.wins_by_dir = {std::min(fv.counts_by_dir.wide, count(20)),
                          std::min(fv.counts_by_dir.body, count(12)),
                          std::min(fv.counts_by_dir.t, count(20))};
        for (int d = 0; d < 3; ++d) fv.serve_pct_by_dir[d] = uniform_unit(rng);
        int pw = count(3);
        fv.prev_point_winner = pw == 0 ? PrevPointWinner::Server
                             : pw == 1 ? PrevPointWinner::Returner
                                       : PrevPointWinner::None;
        fv.run_index_server = uniform_unit(rng) * 400;
        fv.run_index_returner = uniform_unit(rng) * 400;
        fv.anxiety_game = uniform_unit(rng) * 2;
        fv.anxiety_set = uniform_unit(rng) * 2;
        fv.anxiety_match = uniform_unit(rng) * 2;
        fv.anxiety_overall = fv.anxiety_game + fv.anxiety_set + fv.anxiety_match;
        static const Surface surf[] = {Surface::Hard, Surface::Clay, Surface::Grass,
                                       Surface::Carpet};
        fv.surface = surf[count(4)];
        fv.opponent_hand = count(5) == 0 ? Handedness::Left : Handedness::Right;
        fv.label = ServeDirection::Wide;  // overwritten by the labeller
        fv.match_id = "synthetic";
        fv.point_index = 0;
    }
    return rows;
}

// Draws labels from softmax(Wx + b) and records the Bayes-optimal accuracy of
// the generator on this exact sample.
inline LogisticTruth label_rows(std::vector<FeatureVector>& rows, uint64_t seed) {
    const size_t F = feature_names().size();
    std::mt19937_64 rng(derive_seed(seed, 0xbabe));
    LogisticTruth truth;
    truth.W = Matrix(3, F);
    truth.b.assign(3, 0.0);
    // moderate, sparse-ish weights so classes are learnable but not trivial
    for (int c = 0; c < 3; ++c)
        for (size_t j = 0; j < F; ++j)
            truth.W.at(c, j) = uniform_unit(rng) < 0.4 ? normal(rng) * 0.8 : 0.0;
    // scale down the big numeric columns (counts, run indexes)
    for (int c = 0; c < 3; ++c) {
        for (size_t j = 0; j < 6; ++j) truth.W.at(c, j) *= 0.1;
        truth.W.at(c, 12) *= 0.01;
        truth.W.at(c, 13) *= 0.01;
    }
    // intercepts cancel the mean logit of each class, keeping labels balanced
    {
        std::vector<double> mu(F, 0.0), enc0(F);
        for (const auto& fv : rows) {
            encode_row(fv, enc0.data());
            for (size_t j = 0; j < F; ++j) mu[j] += enc0[j];
        }
        for (size_t j = 0; j < F; ++j) mu[j] /= double(rows.size());
        for (int c = 0; c < 3; ++c) {
            double z = 0;
            for (size_t j = 0; j < F; ++j) z += truth.W.at(c, j) * mu[j];
            truth.b[c] = -z;
        }
    }

    std::vector<double> enc(F), logits(3), p(3);
    double bayes = 0;
    for (auto& fv : rows) {
        encode_row(fv, enc.data());
        double hi = -1e300;
        for (int c = 0; c < 3; ++c) {
            double z = truth.b[c];
            for (size_t j = 0; j < F; ++j) z += truth.W.at(c, j) * enc[j];
            logits[c] = z;
            hi = std::max(hi, z);
        }
        double sum = 0;
        for (int c = 0; c < 3; ++c) {
            p[c] = std::exp(logits[c] - hi);
            sum += p[c];
        }
        double best = 0;
        for (int c = 0; c < 3; ++c) best = std::max(best, p[c] / sum);
        double u = uniform_unit(rng) * sum;
        int label = 2;
        double cum = 0;
        for (int c = 0; c < 3; ++c) {
            cum += p[c];
            if (u <= cum) {
                label = c;
                break;
            }
        }
        fv.label = static_cast<ServeDirection>(label);
        bayes += best;
    }
    truth.bayes_accuracy = bayes / double(rows.size());
    return truth;
}

}  // namespace synth
