#include "catch_amalgamated.hpp"

#include <cmath>

#include "oracles.hpp"
#include "servepred/features.hpp"
#include "synthetic.hpp"

using namespace servepred;

namespace {

ServeOutcome so(ServeDirection d, bool in, bool won, int game = 1) {
    return ServeOutcome{d, in, won, game};
}

// the hand-built three point match used by several tests below
struct TinyMatch {
    MatchRecord meta;
    std::vector<PointRecord> points;
    ReplayResult rep;

    TinyMatch() {
        meta.match_id = "tiny";
        meta.player1 = "Srv One";
        meta.player2 = "Ret Two";
        meta.surface = Surface::Hard;
        meta.handedness1 = Handedness::Right;
        meta.handedness2 = Handedness::Left;

        auto add = [&](int idx, const std::string& first, const std::string& second,
                       int winner) {
            PointRecord p;
            p.match_id = "tiny";
            p.point_index = idx;
            p.server = 1;
            p.point_winner = winner;
            auto [c1, t1] = split_point_code(first);
            p.first_serve_code = c1;
            if (!second.empty()) {
                auto [c2, t2] = split_point_code(second);
                p.second_serve_code = c2;
                p.rally_code = t2;
            } else {
                p.rally_code = t1;
            }
            points.push_back(p);
        };
        add(1, "4f18b2*", "", 1);  // wide serve in, rally, server wins
        add(2, "6n", "5f2@", 1);   // T serve fault, body second, server wins
        add(3, "5*", "", 1);       // body ace
        rep = replay(points, MatchFormat{});
    }
};

}  // namespace

TEST_CASE("direction_counts / win_counts / serve_percentages") {
    std::vector<ServeOutcome> prior;
    CHECK(direction_counts(prior) == DirectionCounts{0, 0, 0});
    CHECK(win_counts(prior) == DirectionCounts{0, 0, 0});
    CHECK(serve_percentages(prior) == std::array<double, 3>{0, 0, 0});

    // prior serves W, W, T
    prior = {so(ServeDirection::Wide, true, true), so(ServeDirection::Wide, false, false),
             so(ServeDirection::T, true, false)};
    CHECK(direction_counts(prior) == DirectionCounts{2, 0, 1});
    // W in+won, W fault (lost), T in+lost -> wins (1,0,0)
    CHECK(win_counts(prior) == DirectionCounts{1, 0, 0});
    auto pct = serve_percentages(prior);
    CHECK(pct[0] == 0.5);  // 1 of 2 wide attempts landed in
    CHECK(pct[1] == 0.0);  // no body attempts -> 0 by definition
    CHECK(pct[2] == 1.0);

    // 3 T attempts, 2 in -> 2/3
    prior = {so(ServeDirection::T, true, false), so(ServeDirection::T, false, false),
             so(ServeDirection::T, true, true)};
    CHECK(serve_percentages(prior)[2] == Catch::Approx(2.0 / 3.0));

    // unknown directions count nowhere
    prior.push_back(so(ServeDirection::Unknown, true, true));
    CHECK(direction_counts(prior) == DirectionCounts{0, 0, 3});
}

TEST_CASE("win_counts never exceed direction_counts (random prefixes)") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ServeOutcome> prior;
        int n = static_cast<int>(uniform_below(rng, 40));
        for (int i = 0; i < n; ++i) {
            ServeOutcome s;
            s.direction = static_cast<ServeDirection>(uniform_below(rng, 4));
            s.in = uniform_below(rng, 2) == 0;
            s.server_won = s.in && uniform_below(rng, 2) == 0;
            prior.push_back(s);
        }
        DirectionCounts c = direction_counts(prior), w = win_counts(prior);
        CHECK(w.wide <= c.wide);
        CHECK(w.body <= c.body);
        CHECK(w.t <= c.t);
        auto pct = serve_percentages(prior);
        for (double p : pct) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("run_index_point: aces and empty rallies cost nothing") {
    ServePlacement ace{ServeDirection::T, ServeFault::In, true};
    RunPair r = run_index_point(ace, {}, ServingSide::Deuce);
    CHECK(r.server == 0.0);
    CHECK(r.returner == 0.0);
}

TEST_CASE("run_index_point: one return from the deuce stance") {
    // T serve pulls the returner from the wide stance to the center mark;
    // stance x = 5W/6, contact x = W/2, same depth -> distance W/3, plus
    // half of it as recovery.
    ServePlacement serve{ServeDirection::T, ServeFault::In, false};
    RallyParse rally = parse_rally("b2");
    RunPair r = run_index_point(serve, rally.shots, ServingSide::Deuce);
    CHECK(r.server == 0.0);
    CHECK(r.returner == Catch::Approx(1.5 * kHalfCourtWidth / 3.0));

    // a body serve jams the returner: no movement at all
    ServePlacement body{ServeDirection::Body, ServeFault::In, false};
    RunPair rb = run_index_point(body, rally.shots, ServingSide::Deuce);
    CHECK(rb.returner == 0.0);
}

TEST_CASE("run_index_point: deuce and ad mirror images run the same") {
    ServePlacement wide{ServeDirection::Wide, ServeFault::In, false};
    RallyParse deuce_rally = parse_rally("f18b1f3b2*");
    // mirror: swap direction digits 1 and 3
    RallyParse ad_rally = parse_rally("f38b3f1b2*");
    RunPair d = run_index_point(wide, deuce_rally.shots, ServingSide::Deuce);
    RunPair a = run_index_point(wide, ad_rally.shots, ServingSide::Ad);
    CHECK(d.server == Catch::Approx(a.server));
    CHECK(d.returner == Catch::Approx(a.returner));
}

TEST_CASE("run_index_point: volleys pull the hitter to the net zone") {
    // serve T, return deep to the middle, server volleys: the server moves
    // from the baseline contact point to (center, net zone)
    ServePlacement serve{ServeDirection::T, ServeFault::In, false};
    RallyParse rally = parse_rally("b28v2*");
    RunPair r = run_index_point(serve, rally.shots, ServingSide::Deuce);
    double dx = kHalfCourtWidth / 2.0 - (kHalfCourtWidth / 2.0 + 1.0);
    double dy = kHalfCourtDepth / 6.0 - kHalfCourtDepth;
    double move = std::hypot(dx, dy);
    CHECK(r.server == Catch::Approx(1.5 * move));
}

TEST_CASE("run_index_point: unknown direction and depth add no distance") {
    ServePlacement serve{ServeDirection::Wide, ServeFault::In, false};
    RallyParse rally = parse_rally("qq");  // two all-unknown shots
    RunPair r = run_index_point(serve, rally.shots, ServingSide::Deuce);
    CHECK(r.server == 0.0);
    // the returner still moved to the wide return contact
    CHECK(r.returner > 0.0);
}

TEST_CASE("cumulative_run_index: additive over points") {
    std::vector<PointRun> runs = {{1, {3.0, 2.0}}, {2, {5.0, 1.0}}, {1, {0.5, 0.25}}};
    CHECK(cumulative_run_index({runs.data(), 0}, 1) == 0.0);
    CHECK(cumulative_run_index(runs, 1) == Catch::Approx(3.0 + 1.0 + 0.5));
    CHECK(cumulative_run_index(runs, 2) == Catch::Approx(2.0 + 5.0 + 0.25));
    // additivity: cum(k+1) = cum(k) + point k's run
    for (size_t k = 0; k < runs.size(); ++k) {
        double before = cumulative_run_index({runs.data(), k}, 1);
        double after = cumulative_run_index({runs.data(), k + 1}, 1);
        double delta = runs[k].server == 1 ? runs[k].runs.server : runs[k].runs.returner;
        CHECK(after == Catch::Approx(before + delta));
    }
}

TEST_CASE("anxiety: spot values") {
    // fresh match: uncertainty 1, hope 0, fear 0 -> anxiety 0 at every level
    ScoreState s = new_match(1, {});
    for (Level level : {Level::Game, Level::Set, Level::Match}) {
        AnxietyComponents a = anxiety(s, 1, level);
        CHECK(a.uncertainty == 1.0);
        CHECK(a.hope == 0.0);
        CHECK(a.fear == 0.0);
        CHECK(a.anxiety == 0.0);
    }

    // 40-0: uncertainty 0.25, hope 0.75, fear 0 -> 0.1875
    ScoreState forty = s;
    for (int i = 0; i < 3; ++i) forty = apply_point(forty, 1);
    AnxietyComponents a = anxiety(forty, 1, Level::Game);
    CHECK(a.uncertainty == Catch::Approx(0.25));
    CHECK(a.hope == Catch::Approx(0.75));
    CHECK(a.fear == 0.0);
    CHECK(a.anxiety == Catch::Approx(0.1875));
    // seen from the returner, hope and fear swap
    AnxietyComponents b = anxiety(forty, 2, Level::Game);
    CHECK(b.hope == 0.0);
    CHECK(b.fear == Catch::Approx(0.75));
    CHECK(b.anxiety == Catch::Approx(0.1875));

    // 6-6 in a tiebreak: target 8, uncertainty 1, hope = fear = 0.75 -> 1.5
    ScoreState tb = new_match(1, {});
    for (int g = 0; g < 12; ++g) {
        int server = tb.server();
        for (int p = 0; p < 4; ++p) tb = apply_point(tb, server);
    }
    for (int p = 0; p < 12; ++p) tb = apply_point(tb, p % 2 == 0 ? 1 : 2);
    AnxietyComponents c = anxiety(tb, 1, Level::Game);
    CHECK(c.uncertainty == 1.0);
    CHECK(c.hope == Catch::Approx(0.75));
    CHECK(c.fear == Catch::Approx(0.75));
    CHECK(c.anxiety == Catch::Approx(1.5));
}

TEST_CASE("overall_anxiety: plain sum, commutative") {
    AnxietyComponents g{Level::Game, 0, 0, 0, 0.1875};
    AnxietyComponents s{Level::Set, 0, 0, 0, 0.2};
    AnxietyComponents m{Level::Match, 0, 0, 0, 0.3};
    CHECK(overall_anxiety(g, s, m) == Catch::Approx(0.6875));
    CHECK(overall_anxiety(m, g, s) == Catch::Approx(0.6875));
    AnxietyComponents zero{};
    CHECK(overall_anxiety(zero, zero, zero) == 0.0);
}

TEST_CASE("anxiety: fuzzed ranges over random replays") {
    std::mt19937_64 rng(4242);
    for (int match = 0; match < 60; ++match) {
        MatchFormat fmt;
        fmt.best_of = uniform_below(rng, 2) == 0 ? 3 : 5;
        ScoreState s = new_match(1, fmt);
        while (!s.finished) {
            for (int player : {1, 2}) {
                for (Level level : {Level::Game, Level::Set, Level::Match}) {
                    AnxietyComponents a = anxiety(s, player, level);
                    REQUIRE(a.uncertainty >= 0.0);
                    REQUIRE(a.uncertainty <= 1.0);
                    REQUIRE(a.hope >= 0.0);
                    REQUIRE(a.hope <= 1.0);
                    REQUIRE(a.fear >= 0.0);
                    REQUIRE(a.fear <= 1.0);
                    REQUIRE(a.anxiety >= 0.0);
                    REQUIRE(a.anxiety <= 2.0);
                }
            }
            s = apply_point(s, 1 + static_cast<int>(uniform_below(rng, 2)));
        }
    }
}

TEST_CASE("extract_features: hand-checked three point match") {
    TinyMatch tm;
    MatchFeatures mf = extract_features(tm.meta, tm.points, tm.rep);
    REQUIRE(mf.rows.size() == 3);
    REQUIRE(mf.points_seen == 3);
    CHECK(mf.label_skipped == 0);

    const FeatureVector& p1 = mf.rows[0];
    CHECK(p1.counts_by_dir == DirectionCounts{0, 0, 0});
    CHECK(p1.wins_by_dir == DirectionCounts{0, 0, 0});
    CHECK(p1.prev_point_winner == PrevPointWinner::None);
    CHECK(p1.run_index_server == 0.0);
    CHECK(p1.run_index_returner == 0.0);
    CHECK(p1.anxiety_game == 0.0);
    CHECK(p1.anxiety_overall == 0.0);
    CHECK(p1.label == ServeDirection::Wide);
    CHECK(p1.side == ServingSide::Deuce);
    CHECK(p1.surface == Surface::Hard);
    CHECK(p1.opponent_hand == Handedness::Left);

    const FeatureVector& p2 = mf.rows[1];
    CHECK(p2.counts_by_dir == DirectionCounts{1, 0, 0});
    CHECK(p2.wins_by_dir == DirectionCounts{1, 0, 0});
    CHECK(p2.serve_pct_by_dir[0] == 1.0);
    CHECK(p2.serve_pct_by_dir[2] == 0.0);
    CHECK(p2.prev_point_winner == PrevPointWinner::Server);
    CHECK(p2.side == ServingSide::Ad);
    CHECK(p2.label == ServeDirection::T);  // the label is the first serve, fault or not
    // hand-computed run of point 1:
    // returner: stance (5W/6, 5D/6) -> wide contact (W, 5D/6), then recovery
    double ret_move = kHalfCourtWidth - 5.0 * kHalfCourtWidth / 6.0;
    CHECK(p2.run_index_returner == Catch::Approx(1.5 * ret_move));
    // server: serve contact (W/2+1, D) -> deuce-wide baseline (5W/6, 5D/6)
    double dx = 5.0 * kHalfCourtWidth / 6.0 - (kHalfCourtWidth / 2.0 + 1.0);
    double dy = 5.0 * kHalfCourtDepth / 6.0 - kHalfCourtDepth;
    double srv_move = std::hypot(dx, dy);
    CHECK(p2.run_index_server == Catch::Approx(1.5 * srv_move));
    // 1-0 (15-0): game anxiety 0.75 * 0.25 = 0.1875, set/match still 0
    CHECK(p2.anxiety_game == Catch::Approx(0.1875));
    CHECK(p2.anxiety_set == 0.0);
    CHECK(p2.anxiety_overall == Catch::Approx(0.1875));

    const FeatureVector& p3 = mf.rows[2];
    CHECK(p3.counts_by_dir == DirectionCounts{1, 0, 1});
    CHECK(p3.wins_by_dir == DirectionCounts{1, 0, 0});  // the T serve was a fault
    CHECK(p3.serve_pct_by_dir[0] == 1.0);
    CHECK(p3.serve_pct_by_dir[2] == 0.0);
    CHECK(p3.label == ServeDirection::Body);
    CHECK(p3.side == ServingSide::Deuce);
    // point 2's second-serve rally was a jammed return: nobody moved
    CHECK(p3.run_index_server == Catch::Approx(p2.run_index_server));
    CHECK(p3.run_index_returner == Catch::Approx(p2.run_index_returner));
}

TEST_CASE("extract_features: unknown first-serve direction is skipped") {
    TinyMatch tm;
    tm.points[1].first_serve_code = "0";
    MatchFeatures mf = extract_features(tm.meta, tm.points, tm.rep);
    CHECK(mf.rows.size() == 2);
    CHECK(mf.label_skipped == 1);
    // the skipped point still advances cumulative state (runs, prev winner)
    CHECK(mf.rows[1].point_index == 3);
    CHECK(mf.rows[1].counts_by_dir == DirectionCounts{1, 0, 0});  // unknown not counted

    auto fv = build_feature_vector(tm.meta, tm.points, tm.rep, 2);
    CHECK_FALSE(fv.has_value());  // the label would be undefined
    auto fv3 = build_feature_vector(tm.meta, tm.points, tm.rep, 3);
    REQUIRE(fv3.has_value());
    CHECK(fv3->label == ServeDirection::Body);
}

TEST_CASE("feature causality: full match equals truncated prefix") {
    auto players = std::vector<synth::PlayerProfile>{
        {"Alpha One", Handedness::Right, {0.5, 0.2, 0.3}, {0.3, 0.2, 0.5}},
        {"Beta Two", Handedness::Left, {0.4, 0.3, 0.3}, {0.25, 0.35, 0.4}},
    };
    synth::Corpus corpus = synth::make_corpus(players, 2, 77);
    REQUIRE(corpus.matches.size() == 2);

    std::mt19937_64 rng(123);
    for (const auto& meta : corpus.matches) {
        std::vector<PointRecord> points;
        for (const auto& p : corpus.points)
            if (p.match_id == meta.match_id) points.push_back(p);
        MatchFormat fmt{meta.best_of, meta.final_set_rules, 7, 7};
        ReplayResult rep = replay(points, fmt);
        MatchFeatures full = extract_features(meta, points, rep);
        REQUIRE(full.rows.size() > 20);

        for (int trial = 0; trial < 25; ++trial) {
            const FeatureVector& row =
                full.rows[uniform_below(rng, full.rows.size())];
            auto prefix_row =
                build_feature_vector(meta, points, rep, row.point_index);
            REQUIRE(prefix_row.has_value());
            // exact equality, bit for bit
            CHECK(prefix_row->counts_by_dir == row.counts_by_dir);
            CHECK(prefix_row->wins_by_dir == row.wins_by_dir);
            CHECK(prefix_row->serve_pct_by_dir == row.serve_pct_by_dir);
            CHECK(prefix_row->prev_point_winner == row.prev_point_winner);
            CHECK(prefix_row->run_index_server == row.run_index_server);
            CHECK(prefix_row->run_index_returner == row.run_index_returner);
            CHECK(prefix_row->anxiety_game == row.anxiety_game);
            CHECK(prefix_row->anxiety_set == row.anxiety_set);
            CHECK(prefix_row->anxiety_match == row.anxiety_match);
            CHECK(prefix_row->anxiety_overall == row.anxiety_overall);
            CHECK(prefix_row->label == row.label);
            CHECK(prefix_row->side == row.side);
        }
    }
}

TEST_CASE("cumulative features match the naive recount oracle") {
    auto players = std::vector<synth::PlayerProfile>{
        {"Alpha One", Handedness::Right, {0.5, 0.2, 0.3}, {0.3, 0.2, 0.5}},
        {"Beta Two", Handedness::Left, {0.4, 0.3, 0.3}, {0.25, 0.35, 0.4}},
    };
    synth::Corpus corpus = synth::make_corpus(players, 1, 31);
    std::vector<PointRecord> points;
    for (const auto& p : corpus.points)
        if (p.match_id == corpus.matches[0].match_id) points.push_back(p);
    MatchFormat fmt{3, FinalSetRules::Tiebreak, 7, 7};
    ReplayResult rep = replay(points, fmt);
    MatchFeatures mf = extract_features(corpus.matches[0], points, rep);

    size_t checked = 0;
    for (const auto& row : mf.rows) {
        size_t k = 0;
        while (points[k].point_index != row.point_index) ++k;
        oracle::CumulativeSnapshot snap = oracle::recount_at(points, rep, k);
        REQUIRE(row.counts_by_dir == snap.counts);
        REQUIRE(row.wins_by_dir == snap.wins);
        REQUIRE(row.serve_pct_by_dir == snap.pct);
        REQUIRE(row.run_index_server == snap.run_server);
        REQUIRE(row.run_index_returner == snap.run_returner);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("window_games restricts the cumulative serve features") {
    // server 1 serves game 1 (4 wide serves), server 2 serves game 2,
    // then server 1 serves again
    std::vector<PointRecord> points;
    int idx = 0;
    auto add = [&](int server, const std::string& first, int winner) {
        PointRecord p;
        p.match_id = "w";
        p.point_index = ++idx;
        p.server = server;
        p.point_winner = winner;
        auto [c, t] = split_point_code(first);
        p.first_serve_code = c;
        p.rally_code = t;
        points.push_back(p);
    };
    for (int i = 0; i < 4; ++i) add(1, "4f2*", 1);
    for (int i = 0; i < 4; ++i) add(2, "6f2*", 2);
    add(1, "5*", 1);

    MatchRecord meta;
    meta.match_id = "w";
    meta.player1 = "A";
    meta.player2 = "B";
    ReplayResult rep = replay(points, MatchFormat{});

    MatchFeatures full = extract_features(meta, points, rep);
    const FeatureVector& last_full = full.rows.back();
    CHECK(last_full.counts_by_dir == DirectionCounts{4, 0, 0});

    ExtractOptions windowed;
    windowed.window_games = 1;  // only the current service game
    MatchFeatures win = extract_features(meta, points, rep, windowed);
    const FeatureVector& last_win = win.rows.back();
    CHECK(last_win.counts_by_dir == DirectionCounts{0, 0, 0});

    ExtractOptions two;
    two.window_games = 2;  // reaches back into the previous service game
    MatchFeatures win2 = extract_features(meta, points, rep, two);
    CHECK(win2.rows.back().counts_by_dir == DirectionCounts{4, 0, 0});
}
