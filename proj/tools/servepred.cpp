// servepred - predict professional tennis first-serve directions from
// Match Charting Project data.
//
// Subcommands:
//   clean     load both CSVs, report what cleaning would drop
//   features  export per-player feature matrices (and replay traces)
//   run       the full experiment: select players, train, emit reports
//   report    re-render text tables from a saved accuracy.csv

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "servepred/servepred.hpp"

namespace {

using namespace servepred;

std::vector<std::string> read_players_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open players file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::string name = detail::trim(line);
        if (!name.empty()) out.push_back(name);
    }
    return out;
}

std::vector<ModelKind> parse_models(const std::string& csv) {
    std::vector<ModelKind> out;
    std::string cur;
    std::istringstream is(csv);
    while (std::getline(is, cur, ',')) {
        std::string t = detail::trim(cur);
        if (!t.empty()) out.push_back(model_kind_from(t));
    }
    if (out.empty()) throw DataError("empty model list");
    return out;
}

void apply_column_overrides(ColumnConfig& cols,
                            const std::vector<std::string>& match_over,
                            const std::vector<std::string>& point_over) {
    auto split_kv = [](const std::string& s) -> std::pair<std::string, std::string> {
        auto pos = s.find('=');
        if (pos == std::string::npos)
            throw DataError("column override must look like key=Name: " + s);
        return {detail::trim(s.substr(0, pos)), detail::trim(s.substr(pos + 1))};
    };
    for (const auto& o : match_over) {
        auto [k, v] = split_kv(o);
        auto& m = cols.matches;
        std::map<std::string, std::string*> slots = {
            {"match_id", &m.match_id}, {"player1", &m.player1}, {"player2", &m.player2},
            {"hand1", &m.hand1},       {"hand2", &m.hand2},     {"sex", &m.sex},
            {"date", &m.date},         {"tournament", &m.tournament},
            {"surface", &m.surface},   {"best_of", &m.best_of}, {"final_tb", &m.final_tb}};
        auto it = slots.find(k);
        if (it == slots.end()) throw DataError("unknown matches column key: " + k);
        *it->second = v;
    }
    for (const auto& o : point_over) {
        auto [k, v] = split_kv(o);
        auto& p = cols.points;
        std::map<std::string, std::string*> slots = {
            {"match_id", &p.match_id},   {"point_index", &p.point_index},
            {"server", &p.server},       {"first", &p.first},
            {"second", &p.second},       {"winner", &p.winner},
            {"tiebreak", &p.tiebreak}};
        auto it = slots.find(k);
        if (it == slots.end()) throw DataError("unknown points column key: " + k);
        *it->second = v;
    }
}

struct CommonArgs {
    std::string matches, points, tour, players_file, out;
    int min_matches = 30;
    std::uint64_t seed = 0;
    double split = 0.70;
    int window_games = 0;  // 0 = whole match
    std::vector<std::string> models = {"LR,RF,DT,SVM,NN"};
    bool split_by_match = false;
    double replay_tolerance = 0.0;
    int jobs = 0;
    std::vector<std::string> matches_cols, points_cols;
};

void add_data_options(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--matches", a.matches, "matches CSV file")->required();
    cmd->add_option("--points", a.points, "points CSV file")->required();
    cmd->add_option("--tour", a.tour, "restrict to one tour (M or W)");
    cmd->add_option("--matches-col", a.matches_cols,
                    "matches column override key=Name (repeatable)");
    cmd->add_option("--points-col", a.points_cols,
                    "points column override key=Name (repeatable)");
}

void add_selection_options(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--min-matches", a.min_matches,
                    "select players with at least this many matches");
    cmd->add_option("--players-file", a.players_file,
                    "file with one player name per line (overrides --min-matches)");
}

ExperimentConfig make_config(const CommonArgs& a) {
    ExperimentConfig cfg;
    cfg.matches_path = a.matches;
    cfg.points_path = a.points;
    if (!a.tour.empty()) {
        cfg.tour = detail::parse_sex(a.tour);
        if (cfg.tour == Sex::Unknown) throw DataError("bad --tour value: " + a.tour);
    }
    cfg.min_matches = a.min_matches;
    cfg.split_fraction = a.split;
    cfg.seed = a.seed;
    if (a.window_games > 0) cfg.window_games = a.window_games;
    std::string joined;
    for (const auto& part : a.models) {
        if (!joined.empty()) joined += ',';
        joined += part;
    }
    cfg.models = parse_models(joined);
    if (!a.players_file.empty()) cfg.players = read_players_file(a.players_file);
    cfg.out_dir = a.out;
    cfg.split_by_match = a.split_by_match;
    cfg.replay_tolerance = a.replay_tolerance;
    cfg.jobs = a.jobs;
    apply_column_overrides(cfg.columns, a.matches_cols, a.points_cols);
    return cfg;
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    for (char c : name)
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

int cmd_clean(const CommonArgs& a) {
    ExperimentConfig cfg = make_config(a);
    LoadedData data = load_and_clean(cfg);
    std::cout << data.cleaning.to_text();
    if (!data.load_rejections.empty()) {
        std::cout << "rejected point rows: " << data.load_rejections.size() << "\n";
        for (const auto& r : data.load_rejections) std::cout << "  " << r << "\n";
    }
    if (!a.out.empty()) {
        std::filesystem::create_directories(a.out);
        auto os = open_out(std::filesystem::path(a.out) / "cleaning_log.txt");
        os << data.cleaning.to_text();
        for (const auto& r : data.load_rejections) os << "rejected: " << r << "\n";
        std::cout << "wrote " << (std::filesystem::path(a.out) / "cleaning_log.txt").string()
                  << "\n";
    }
    return 0;
}

int cmd_features(const CommonArgs& a, const std::string& dump_replay) {
    ExperimentConfig cfg = make_config(a);
    LoadedData data = load_and_clean(cfg);

    if (!dump_replay.empty()) {
        for (const auto& m : data.matches) {
            if (m.match_id != dump_replay) continue;
            auto pts = data.points_of(m.match_id);
            std::vector<PointRecord> points(pts.begin(), pts.end());
            MatchFormat fmt{m.best_of, m.final_set_rules, 7, 7};
            std::cout << replay_trace(points, fmt, cfg.replay_tolerance);
            return 0;
        }
        std::cerr << "match not found: " << dump_replay << "\n";
        return 1;
    }

    std::vector<std::string> players =
        cfg.players.empty() ? select_players(data.matches, cfg.min_matches) : cfg.players;
    if (players.empty()) {
        std::cerr << "no players selected\n";
        return 1;
    }
    std::string out_dir = a.out.empty() ? "." : a.out;
    std::filesystem::create_directories(out_dir);
    for (const auto& player : players) {
        PlayerRows rows = collect_player_rows(player, data, cfg);
        for (const auto& line : rows.log) std::cerr << line << "\n";
        auto write_side = [&](const std::vector<FeatureVector>& v, const char* side) {
            auto path = std::filesystem::path(out_dir) /
                        ("features_" + sanitize_filename(player) + "_" + side + ".csv");
            auto os = open_out(path);
            write_feature_csv(v, os);
            std::cout << "wrote " << path.string() << " (" << v.size() << " rows)\n";
        };
        write_side(rows.deuce, "deuce");
        write_side(rows.ad, "ad");
    }
    return 0;
}

int cmd_run(const CommonArgs& a) {
    ExperimentConfig cfg = make_config(a);
    if (cfg.out_dir.empty()) throw DataError("run requires --out");
    ExperimentResult result = run_experiment(cfg);
    auto written = emit_reports(result, cfg.out_dir);
    std::cout << accuracy_table_text(result.report, ServingSide::Deuce,
                                     "First Serve Direction Prediction Accuracy - Deuce Side")
              << "\n"
              << accuracy_table_text(result.report, ServingSide::Ad,
                                     "First Serve Direction Prediction Accuracy - Ad Side")
              << "\n";
    for (const auto& p : written) std::cout << "wrote " << p << "\n";
    return 0;
}

int cmd_report(const std::string& accuracy_csv, const std::string& out) {
    std::ifstream is(accuracy_csv, std::ios::binary);
    if (!is) throw DataError("cannot open " + accuracy_csv);
    AccuracyReport report = load_accuracy_csv(is);
    std::string deuce = accuracy_table_text(
        report, ServingSide::Deuce,
        "First Serve Direction Prediction Accuracy - Deuce Side");
    std::string ad = accuracy_table_text(
        report, ServingSide::Ad, "First Serve Direction Prediction Accuracy - Ad Side");
    std::cout << deuce << "\n" << ad;
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        open_out(std::filesystem::path(out) / "accuracy_deuce.txt") << deuce;
        open_out(std::filesystem::path(out) / "accuracy_ad.txt") << ad;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first-serve direction prediction from Match Charting Project data"};
    app.require_subcommand(1);
    // key=value config; keys live in a [subcommand] section (or dotted:
    // run.matches=...) and mirror the flags
    app.set_config("--config", "", "plain-text key=value config mirroring the flags");

    CommonArgs a;
    std::string dump_replay, accuracy_csv;

    CLI::App* clean = app.add_subcommand("clean", "load and clean the dataset");
    add_data_options(clean, a);
    clean->add_option("--out", a.out, "directory for the cleaning log");

    CLI::App* features = app.add_subcommand("features", "export feature matrices");
    add_data_options(features, a);
    add_selection_options(features, a);
    features->add_option("--window-games", a.window_games,
                         "cumulative serve counts look back this many service games");
    features->add_option("--replay-tolerance", a.replay_tolerance,
                         "allowed fraction of charted-vs-derived server mismatches");
    features->add_option("--out", a.out, "output directory");
    features->add_option("--dump-replay", dump_replay,
                         "print the replay trace of one match id and exit");

    CLI::App* run = app.add_subcommand("run", "run the full experiment");
    add_data_options(run, a);
    add_selection_options(run, a);
    run->add_option("--seed", a.seed, "master RNG seed");
    run->add_option("--split", a.split, "training fraction of each player/side dataset");
    run->add_option("--window-games", a.window_games,
                    "cumulative serve counts look back this many service games");
    run->add_option("--models", a.models, "comma list from LR,RF,DT,SVM,NN");
    run->add_option("--replay-tolerance", a.replay_tolerance,
                    "allowed fraction of charted-vs-derived server mismatches");
    run->add_flag("--split-by-match", a.split_by_match,
                  "assign whole matches to train or test instead of points");
    run->add_option("--jobs", a.jobs, "parallel player jobs (0 = all cores)");
    run->add_option("--out", a.out, "output directory for reports")->required();

    CLI::App* report = app.add_subcommand("report", "re-render tables from accuracy.csv");
    report->add_option("--accuracy", accuracy_csv, "accuracy.csv from a previous run")
        ->required();
    report->add_option("--out", a.out, "directory for the text tables");

    CLI11_PARSE(app, argc, argv);

    try {
        if (clean->parsed()) return cmd_clean(a);
        if (features->parsed()) return cmd_features(a, dump_replay);
        if (run->parsed()) return cmd_run(a);
        if (report->parsed()) return cmd_report(accuracy_csv, a.out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
