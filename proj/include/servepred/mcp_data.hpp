// mcp_data.hpp - Match Charting Project match/point CSV loading and cleaning
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "servepred/csv.hpp"
#include "servepred/errors.hpp"
#include "servepred/notation.hpp"

namespace servepred {

enum class Surface { Hard, Clay, Grass, Carpet, Unknown };
enum class Handedness { Right, Left, Unknown };
enum class Sex { M, W, Unknown };
enum class FinalSetRules { Tiebreak, Advantage };

struct Date {
    int year = 0, month = 0, day = 0;
    bool operator==(const Date&) const = default;
};

struct MatchRecord {
    std::string match_id;
    Date date;
    std::string tournament;
    Surface surface = Surface::Unknown;
    std::string player1, player2;
    Handedness handedness1 = Handedness::Unknown;
    Handedness handedness2 = Handedness::Unknown;
    Sex sex = Sex::Unknown;
    int best_of = 3;
    FinalSetRules final_set_rules = FinalSetRules::Tiebreak;
};

// One charted point. Serve tokens are split off the raw point strings at
// load time; rally_code is the rally that was actually played (after the
// second serve when the first one faulted).
struct PointRecord {
    std::string match_id;
    int point_index = 0;
    int server = 0;  // 1 or 2, 0 = unknown
    std::string first_serve_code;
    std::string second_serve_code;  // empty when the first serve was in
    std::string rally_code;
    int point_winner = 0;  // 1 or 2
    bool is_tiebreak_point = false;
};

// Column-name mapping; defaults match the published MCP layout.
struct ColumnConfig {
    struct {
        std::string match_id = "match_id";
        std::string player1 = "Player 1";
        std::string player2 = "Player 2";
        std::string hand1 = "Pl 1 hand";
        std::string hand2 = "Pl 2 hand";
        std::string sex = "Gender";
        std::string date = "Date";
        std::string tournament = "Tournament";
        std::string surface = "Surface";
        std::string best_of = "Best of";
        std::string final_tb = "Final TB?";
    } matches;
    struct {
        std::string match_id = "match_id";
        std::string point_index = "Pt";
        std::string server = "Svr";
        std::string first = "1st";
        std::string second = "2nd";
        std::string winner = "PtWinner";
        std::string tiebreak = "TB?";
    } points;
};

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::optional<int> parse_int(std::string_view s) {
    std::string t = trim(s);
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
    return v;
}

inline Surface parse_surface(std::string_view s) {
    std::string t = lower(trim(s));
    if (t == "hard" || t == "indoor hard" || t == "outdoor hard") return Surface::Hard;
    if (t == "clay") return Surface::Clay;
    if (t == "grass") return Surface::Grass;
    if (t == "carpet" || t == "indoor carpet") return Surface::Carpet;
    return Surface::Unknown;
}

inline Handedness parse_hand(std::string_view s) {
    std::string t = lower(trim(s));
    if (t == "r" || t == "right" || t == "right-handed") return Handedness::Right;
    if (t == "l" || t == "left" || t == "left-handed") return Handedness::Left;
    return Handedness::Unknown;
}

inline Sex parse_sex(std::string_view s) {
    std::string t = lower(trim(s));
    if (t == "m" || t == "men" || t == "male") return Sex::M;
    if (t == "w" || t == "f" || t == "women" || t == "female") return Sex::W;
    return Sex::Unknown;
}

inline Date parse_date(std::string_view s) {
    std::string t = trim(s);
    Date d;
    if (t.size() == 8) {  // YYYYMMDD
        auto y = parse_int(t.substr(0, 4));
        auto m = parse_int(t.substr(4, 2));
        auto dd = parse_int(t.substr(6, 2));
        if (y && m && dd) d = Date{*y, *m, *dd};
    } else if (t.size() == 10 && t[4] == '-' && t[7] == '-') {  // YYYY-MM-DD
        auto y = parse_int(t.substr(0, 4));
        auto m = parse_int(t.substr(5, 2));
        auto dd = parse_int(t.substr(8, 2));
        if (y && m && dd) d = Date{*y, *m, *dd};
    }
    return d;
}

}  // namespace detail

inline std::vector<MatchRecord> load_matches(const std::string& path,
                                             const ColumnConfig& cols = {}) {
    CsvTable t = read_csv_file(path);
    const auto& m = cols.matches;
    int c_id = t.column(m.match_id), c_p1 = t.column(m.player1), c_p2 = t.column(m.player2);
    std::string missing;
    if (c_id < 0) missing += " '" + m.match_id + "'";
    if (c_p1 < 0) missing += " '" + m.player1 + "'";
    if (c_p2 < 0) missing += " '" + m.player2 + "'";
    if (!missing.empty())
        throw DataError(path + ": missing mandatory column(s):" + missing);

    int c_h1 = t.column(m.hand1), c_h2 = t.column(m.hand2), c_sex = t.column(m.sex);
    int c_date = t.column(m.date), c_tour = t.column(m.tournament);
    int c_surf = t.column(m.surface), c_bo = t.column(m.best_of), c_ftb = t.column(m.final_tb);

    auto cell = [](const std::vector<std::string>& row, int c) -> std::string {
        return c >= 0 && c < static_cast<int>(row.size()) ? row[c] : std::string();
    };

    std::vector<MatchRecord> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        MatchRecord r;
        r.match_id = detail::trim(cell(row, c_id));
        r.player1 = detail::trim(cell(row, c_p1));
        r.player2 = detail::trim(cell(row, c_p2));
        r.handedness1 = detail::parse_hand(cell(row, c_h1));
        r.handedness2 = detail::parse_hand(cell(row, c_h2));
        r.sex = detail::parse_sex(cell(row, c_sex));
        r.date = detail::parse_date(cell(row, c_date));
        r.tournament = detail::trim(cell(row, c_tour));
        r.surface = detail::parse_surface(cell(row, c_surf));
        auto bo = detail::parse_int(cell(row, c_bo));
        r.best_of = (bo && *bo == 5) ? 5 : 3;
        std::string ftb = detail::lower(detail::trim(cell(row, c_ftb)));
        r.final_set_rules = (ftb == "0" || ftb == "false" || ftb == "no")
                                ? FinalSetRules::Advantage
                                : FinalSetRules::Tiebreak;
        out.push_back(std::move(r));
    }
    return out;
}

struct PointLoadResult {
    std::vector<PointRecord> points;  // sorted by (match_id, point_index)
    std::vector<std::string> rejected;  // one message per dropped row
};

inline PointLoadResult load_points(const std::string& path,
                                   const ColumnConfig& cols = {}) {
    CsvTable t = read_csv_file(path);
    const auto& p = cols.points;
    int c_id = t.column(p.match_id), c_pt = t.column(p.point_index);
    int c_svr = t.column(p.server), c_first = t.column(p.first);
    int c_winner = t.column(p.winner);
    std::string missing;
    if (c_id < 0) missing += " '" + p.match_id + "'";
    if (c_pt < 0) missing += " '" + p.point_index + "'";
    if (c_svr < 0) missing += " '" + p.server + "'";
    if (c_first < 0) missing += " '" + p.first + "'";
    if (c_winner < 0) missing += " '" + p.winner + "'";
    if (!missing.empty())
        throw DataError(path + ": missing mandatory column(s):" + missing);

    int c_second = t.column(p.second), c_tb = t.column(p.tiebreak);

    auto cell = [](const std::vector<std::string>& row, int c) -> std::string {
        return c >= 0 && c < static_cast<int>(row.size()) ? row[c] : std::string();
    };

    PointLoadResult out;
    std::set<std::pair<std::string, int>> seen;
    size_t line = 1;
    for (const auto& row : t.rows) {
        ++line;
        PointRecord r;
        r.match_id = detail::trim(cell(row, c_id));
        auto idx = detail::parse_int(cell(row, c_pt));
        if (!idx) {
            out.rejected.push_back("row " + std::to_string(line) +
                                   ": non-numeric point index '" + cell(row, c_pt) + "'");
            continue;
        }
        r.point_index = *idx;
        if (!seen.insert({r.match_id, r.point_index}).second) {
            out.rejected.push_back("row " + std::to_string(line) + ": duplicate point " +
                                   r.match_id + "#" + std::to_string(r.point_index));
            continue;
        }
        auto svr = detail::parse_int(cell(row, c_svr));
        r.server = (svr && (*svr == 1 || *svr == 2)) ? *svr : 0;
        auto win = detail::parse_int(cell(row, c_winner));
        if (!win || (*win != 1 && *win != 2)) {
            out.rejected.push_back("row " + std::to_string(line) +
                                   ": point winner not a player ref '" +
                                   cell(row, c_winner) + "'");
            continue;
        }
        r.point_winner = *win;

        auto [serve1, tail1] = split_point_code(detail::trim(cell(row, c_first)));
        std::string raw2 = detail::trim(cell(row, c_second));
        r.first_serve_code = serve1;
        if (!raw2.empty()) {
            auto [serve2, tail2] = split_point_code(raw2);
            r.second_serve_code = serve2;
            r.rally_code = tail2;
        } else {
            r.rally_code = tail1;
        }
        std::string tb = detail::trim(cell(row, c_tb));
        r.is_tiebreak_point = (tb == "1" || detail::lower(tb) == "true");
        out.points.push_back(std::move(r));
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const PointRecord& a, const PointRecord& b) {
                         if (a.match_id != b.match_id) return a.match_id < b.match_id;
                         return a.point_index < b.point_index;
                     });
    return out;
}

struct CleaningLog {
    int duplicate_matches = 0;
    int invalid_matches = 0;  // empty ids or player1 == player2
    int orphan_points = 0;
    int empty_matches = 0;  // matches with zero points
    int input_matches = 0, input_points = 0;
    int kept_matches = 0, kept_points = 0;

    std::string to_text() const {
        std::ostringstream os;
        os << "cleaning report\n"
           << "  input matches:      " << input_matches << "\n"
           << "  input points:       " << input_points << "\n"
           << "  duplicate matches:  " << duplicate_matches << "\n"
           << "  invalid matches:    " << invalid_matches << "\n"
           << "  orphan points:      " << orphan_points << "\n"
           << "  matches w/o points: " << empty_matches << "\n"
           << "  kept matches:       " << kept_matches << "\n"
           << "  kept points:        " << kept_points << "\n";
        return os.str();
    }
};

struct CleanResult {
    std::vector<MatchRecord> matches;
    std::vector<PointRecord> points;
    CleaningLog log;
};

// Drops duplicate match ids (keeps the first), orphan points and matches
// without any points. Never fails; everything dropped is counted.
inline CleanResult clean_dataset(std::vector<MatchRecord> matches,
                                 std::vector<PointRecord> points) {
    CleanResult out;
    out.log.input_matches = static_cast<int>(matches.size());
    out.log.input_points = static_cast<int>(points.size());

    std::set<std::string> ids;
    std::vector<MatchRecord> unique_matches;
    for (auto& m : matches) {
        if (m.match_id.empty() || m.player1.empty() || m.player2.empty() ||
            m.player1 == m.player2) {
            ++out.log.invalid_matches;
            continue;
        }
        if (!ids.insert(m.match_id).second) {
            ++out.log.duplicate_matches;
            continue;
        }
        unique_matches.push_back(std::move(m));
    }

    std::map<std::string, int> points_per_match;
    for (auto& pt : points) {
        if (!ids.count(pt.match_id)) {
            ++out.log.orphan_points;
            continue;
        }
        ++points_per_match[pt.match_id];
        out.points.push_back(std::move(pt));
    }

    for (auto& m : unique_matches) {
        if (!points_per_match.count(m.match_id)) {
            ++out.log.empty_matches;
            continue;
        }
        out.matches.push_back(std::move(m));
    }
    // drop points whose match was removed as empty (none by construction) or
    // invalid; recheck against the final match set for idempotence
    std::set<std::string> final_ids;
    for (const auto& m : out.matches) final_ids.insert(m.match_id);
    std::vector<PointRecord> kept;
    kept.reserve(out.points.size());
    for (auto& pt : out.points) {
        if (final_ids.count(pt.match_id))
            kept.push_back(std::move(pt));
        else
            ++out.log.orphan_points;
    }
    out.points = std::move(kept);

    out.log.kept_matches = static_cast<int>(out.matches.size());
    out.log.kept_points = static_cast<int>(out.points.size());
    return out;
}

inline const char* to_string(Surface s) {
    switch (s) {
        case Surface::Hard: return "hard";
        case Surface::Clay: return "clay";
        case Surface::Grass: return "grass";
        case Surface::Carpet: return "carpet";
        default: return "unknown";
    }
}

}  // namespace servepred
