// reports.hpp - CSV and aligned-text renderings of the experiment outputs
#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "servepred/csv.hpp"
#include "servepred/models/common.hpp"
#include "servepred/models/dataset.hpp"
#include "servepred/pipeline.hpp"

namespace servepred {

inline const char* to_string(ServingSide s) {
    return s == ServingSide::Deuce ? "deuce" : "ad";
}

inline ServingSide side_from(const std::string& s) {
    if (s == "deuce") return ServingSide::Deuce;
    if (s == "ad") return ServingSide::Ad;
    throw DataError("unknown serving side: " + s);
}

// ---- accuracy ---------------------------------------------------------------

inline void write_accuracy_csv(const AccuracyReport& r, std::ostream& os) {
    write_csv_row(os, {"player", "side", "model", "accuracy", "n_train", "n_test"});
    for (const auto& c : r.cells)
        write_csv_row(os, {c.player, to_string(c.side), to_string(c.model),
                           fmt_double(c.accuracy), std::to_string(c.n_train),
                           std::to_string(c.n_test)});
}

inline AccuracyReport load_accuracy_csv(std::istream& is) {
    CsvTable t = read_csv(is);
    int cp = t.column("player"), cs = t.column("side"), cm = t.column("model");
    int ca = t.column("accuracy"), ctr = t.column("n_train"), cte = t.column("n_test");
    if (cp < 0 || cs < 0 || cm < 0 || ca < 0 || ctr < 0 || cte < 0)
        throw DataError("accuracy csv: missing columns");
    AccuracyReport r;
    std::set<std::string> seen_players;
    std::set<std::string> seen_models;
    for (const auto& row : t.rows) {
        AccuracyCell c;
        c.player = row[cp];
        c.side = side_from(row[cs]);
        c.model = model_kind_from(row[cm]);
        c.accuracy = std::stod(row[ca]);
        c.n_train = std::stoi(row[ctr]);
        c.n_test = std::stoi(row[cte]);
        if (seen_players.insert(c.player).second) r.players.push_back(c.player);
        seen_models.insert(row[cm]);
        r.cells.push_back(std::move(c));
    }
    for (ModelKind k : report_model_order())
        if (seen_models.count(to_string(k))) r.models.push_back(k);
    return r;
}

namespace detail {

inline std::pair<std::string, std::string> split_name(const std::string& full) {
    auto pos = full.find(' ');
    if (pos == std::string::npos) return {"", full};
    return {full.substr(0, pos), full.substr(pos + 1)};
}

inline std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

}  // namespace detail

// Aligned table for one side: two name columns, one column per model, MEAN.
inline std::string accuracy_table_text(const AccuracyReport& r, ServingSide side,
                                       const std::string& title) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head = {"First name", "Last name"};
    for (ModelKind k : r.models) head.push_back(to_string(k));
    head.push_back("MEAN");
    grid.push_back(head);

    for (const auto& player : r.players) {
        if (!r.player_mean(player, side)) continue;
        auto [first, last] = detail::split_name(player);
        std::vector<std::string> row = {first, last};
        for (ModelKind k : r.models) {
            const AccuracyCell* c = r.find(player, side, k);
            row.push_back(c ? detail::fixed2(c->accuracy) : "-");
        }
        row.push_back(detail::fixed2(*r.player_mean(player, side)));
        grid.push_back(row);
    }
    std::vector<std::string> mean_row = {"MEAN", ""};
    for (ModelKind k : r.models) {
        auto m = r.model_mean(k, side);
        mean_row.push_back(m ? detail::fixed2(*m) : "-");
    }
    auto g = r.grand_mean(side);
    mean_row.push_back(g ? detail::fixed2(*g) : "-");
    grid.push_back(mean_row);

    std::vector<size_t> width(grid[0].size(), 0);
    for (const auto& row : grid)
        for (size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());

    std::ostringstream os;
    os << title << "\n\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        if (i == 1 || i + 1 == grid.size()) {
            size_t total = 0;
            for (size_t j = 0; j < width.size(); ++j) total += width[j] + (j ? 2 : 0);
            os << std::string(total, '-') << "\n";
        }
        for (size_t j = 0; j < grid[i].size(); ++j) {
            if (j) os << "  ";
            os << grid[i][j] << std::string(width[j] - grid[i][j].size(), ' ');
        }
        os << "\n";
    }
    return os.str();
}

// ---- importance and distributions --------------------------------------------

inline void write_importance_csv(const std::vector<ImportanceRow>& rows,
                                 std::ostream& os) {
    write_csv_row(os, {"player", "side", "model", "rank", "feature", "importance"});
    for (const auto& r : rows)
        write_csv_row(os, {r.player, to_string(r.side), to_string(r.model),
                           std::to_string(r.rank), r.feature, fmt_double(r.importance)});
}

inline void write_distribution_csv(const std::vector<DistributionRow>& rows,
                                   std::ostream& os) {
    write_csv_row(os, {"player", "side", "wide", "body", "t", "n"});
    for (const auto& r : rows)
        write_csv_row(os, {r.player, to_string(r.side), fmt_double(r.wide),
                           fmt_double(r.body), fmt_double(r.t), std::to_string(r.n)});
}

// ---- feature matrix export ----------------------------------------------------

inline void write_feature_csv(std::span<const FeatureVector> rows, std::ostream& os) {
    std::vector<std::string> head = feature_names();
    head.push_back("label");
    head.push_back("match_id");
    head.push_back("point_index");
    write_csv_row(os, head);
    std::vector<double> enc(feature_names().size());
    for (const auto& fv : rows) {
        encode_row(fv, enc.data());
        std::vector<std::string> row;
        row.reserve(head.size());
        for (double v : enc) row.push_back(fmt_double(v));
        row.push_back(to_string(fv.label));
        row.push_back(fv.match_id);
        row.push_back(std::to_string(fv.point_index));
        write_csv_row(os, row);
    }
}

// ---- bundle writer -------------------------------------------------------------

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw DataError("cannot write file: " + p.string());
    return os;
}

inline std::vector<std::string> emit_reports(const ExperimentResult& result,
                                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw DataError("cannot create output directory: " + out_dir);

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, auto&& fn) {
        auto os = open_out(dir / name);
        fn(os);
        written.push_back((dir / name).string());
    };

    emit("accuracy.csv", [&](std::ostream& os) { write_accuracy_csv(result.report, os); });
    emit("accuracy_deuce.txt", [&](std::ostream& os) {
        os << accuracy_table_text(result.report, ServingSide::Deuce,
                                  "First Serve Direction Prediction Accuracy - Deuce Side");
    });
    emit("accuracy_ad.txt", [&](std::ostream& os) {
        os << accuracy_table_text(result.report, ServingSide::Ad,
                                  "First Serve Direction Prediction Accuracy - Ad Side");
    });
    emit("importance.csv",
         [&](std::ostream& os) { write_importance_csv(result.importances, os); });
    emit("distributions.csv",
         [&](std::ostream& os) { write_distribution_csv(result.distributions, os); });
    emit("cleaning_log.txt", [&](std::ostream& os) { os << result.cleaning.to_text(); });
    emit("run_log.txt", [&](std::ostream& os) {
        for (const auto& line : result.log) os << line << "\n";
    });
    return written;
}

}  // namespace servepred
