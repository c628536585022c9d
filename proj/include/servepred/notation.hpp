// notation.hpp - the shot-by-shot charting grammar this library understands
//
// Serve token:  placement digit [0456]
//               + optional fault letters [nwdxge] (first one is kept)
//               + optional terminal [*#]  ('*' = ace when the serve was in)
// Rally token:  sequence of (shot letter [fbrsvzopuylmhijktq]
//               + optional direction digit [123] + optional depth digit [789])
//               with one optional final terminal symbol:
//               '*' winner, '#' forced-error inducer, '@' unforced error,
//               'n'/'w'/'d'/'x' error locations (x folds into wide).
//
// Characters from the annotation set "+-=;^!" (serve-and-volley, court
// position, lets, shanks) are skipped and counted separately. Any other
// character outside the grammar yields a Shot with all-Unknown fields and
// bumps the parse-quality counter.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "servepred/errors.hpp"

namespace servepred {

enum class ServeDirection { Wide = 0, Body = 1, T = 2, Unknown = 3 };
enum class ServeFault { In, Net, Wide, Deep, WideAndDeep, FootFault, Unknown };

enum class ShotKind {
    Forehand, Backhand, ForehandSlice, BackhandSlice, Volley,
    Overhead, DropShot, Lob, HalfVolley, Trick, Unknown
};
enum class ShotDirection { ToDeuceSide, ToMiddle, ToAdSide, Unknown };
enum class ShotDepth { Shallow, Deep, Unknown };
enum class Terminal {
    None, Winner, ForcedErrorInduced, UnforcedError,
    NetError, WideError, DeepError
};

struct ServePlacement {
    ServeDirection direction = ServeDirection::Unknown;
    ServeFault fault = ServeFault::In;
    bool is_ace = false;
};

struct Shot {
    ShotKind kind = ShotKind::Unknown;
    ShotDirection direction = ShotDirection::Unknown;
    ShotDepth depth = ShotDepth::Unknown;
    Terminal terminal = Terminal::None;

    bool operator==(const Shot&) const = default;
};

struct RallyParse {
    std::vector<Shot> shots;
    int unrecognized = 0;  // parse-quality metric: chars outside the grammar
    int annotations = 0;   // known annotation chars skipped
};

namespace grammar {

inline std::optional<ServeDirection> serve_direction(char c) {
    switch (c) {
        case '4': return ServeDirection::Wide;
        case '5': return ServeDirection::Body;
        case '6': return ServeDirection::T;
        case '0': return ServeDirection::Unknown;
        default: return std::nullopt;
    }
}

inline std::optional<ServeFault> serve_fault(char c) {
    switch (c) {
        case 'n': return ServeFault::Net;
        case 'w': return ServeFault::Wide;
        case 'd': return ServeFault::Deep;
        case 'x': return ServeFault::WideAndDeep;
        case 'g': return ServeFault::FootFault;
        case 'e': return ServeFault::Unknown;
        default: return std::nullopt;
    }
}

inline std::optional<ShotKind> shot_kind(char c) {
    switch (c) {
        case 'f': return ShotKind::Forehand;
        case 'b': return ShotKind::Backhand;
        case 'r': return ShotKind::ForehandSlice;
        case 's': return ShotKind::BackhandSlice;
        case 'v': case 'z': case 'j': case 'k': return ShotKind::Volley;
        case 'o': case 'p': return ShotKind::Overhead;
        case 'u': case 'y': return ShotKind::DropShot;
        case 'l': case 'm': return ShotKind::Lob;
        case 'h': case 'i': return ShotKind::HalfVolley;
        case 't': return ShotKind::Trick;
        case 'q': return ShotKind::Unknown;
        default: return std::nullopt;
    }
}

inline std::optional<Terminal> terminal_symbol(char c) {
    switch (c) {
        case '*': return Terminal::Winner;
        case '#': return Terminal::ForcedErrorInduced;
        case '@': return Terminal::UnforcedError;
        case 'n': return Terminal::NetError;
        case 'w': return Terminal::WideError;
        case 'd': return Terminal::DeepError;
        case 'x': return Terminal::WideError;  // wide-and-deep folds into wide
        default: return std::nullopt;
    }
}

inline bool is_annotation(char c) {
    return c == '+' || c == '-' || c == '=' || c == ';' || c == '^' || c == '!';
}

}  // namespace grammar

// Parses a serve token. Throws ParseError on an empty token or an illegal
// leading character; total over the grammar alphabet otherwise.
inline ServePlacement parse_serve(std::string_view token) {
    if (token.empty()) throw ParseError(std::string(token));
    auto dir = grammar::serve_direction(token[0]);
    if (!dir) throw ParseError(std::string(token));

    ServePlacement p;
    p.direction = *dir;
    size_t i = 1;
    bool fault_set = false;
    while (i < token.size()) {
        if (auto f = grammar::serve_fault(token[i])) {
            if (!fault_set) {
                p.fault = *f;
                fault_set = true;
            }
            ++i;
        } else {
            break;
        }
    }
    if (i < token.size() && (token[i] == '*' || token[i] == '#')) {
        if (token[i] == '*' && p.fault == ServeFault::In) p.is_ace = true;
        ++i;
    }
    if (i != token.size()) throw ParseError(std::string(token));
    return p;
}

// Parses a rally token. Never throws. Direction/depth digits attach to the
// preceding grammar shot; digits that cannot attach only bump the
// parse-quality counter. Once a terminal symbol lands on a shot, following
// terminal-cluster characters ("n@", "n8@") are absorbed until the next shot
// letter. Characters outside the grammar entirely yield an all-Unknown Shot.
// Post-parse, a terminal may sit only on the last shot.
inline RallyParse parse_rally(std::string_view token) {
    RallyParse out;
    bool terminal_seen = false;
    bool last_junk = false;
    for (char c : token) {
        if (auto kind = grammar::shot_kind(c)) {
            out.shots.push_back(Shot{*kind, ShotDirection::Unknown,
                                     ShotDepth::Unknown, Terminal::None});
            terminal_seen = false;
            last_junk = false;
            continue;
        }
        if (c >= '1' && c <= '9') {
            if (terminal_seen) continue;  // digit inside a terminal cluster
            if (out.shots.empty() || last_junk) {
                ++out.unrecognized;
                continue;
            }
            Shot& s = out.shots.back();
            if (c <= '3' && s.direction == ShotDirection::Unknown) {
                s.direction = c == '1' ? ShotDirection::ToDeuceSide
                            : c == '2' ? ShotDirection::ToMiddle
                                       : ShotDirection::ToAdSide;
            } else if (c >= '7' && s.depth == ShotDepth::Unknown) {
                s.depth = c == '7' ? ShotDepth::Shallow
                        : c == '8' ? ShotDepth::Deep
                                   : ShotDepth::Unknown;
            } else {
                ++out.unrecognized;
            }
            continue;
        }
        if (auto term = grammar::terminal_symbol(c)) {
            if (out.shots.empty() || last_junk) {
                ++out.unrecognized;  // orphan terminal, nothing to attach to
            } else if (!terminal_seen) {
                out.shots.back().terminal = *term;
                terminal_seen = true;
            }
            // extra symbols in a terminal cluster (e.g. "n@") are absorbed
            continue;
        }
        if (grammar::is_annotation(c)) {
            ++out.annotations;
            continue;
        }
        out.shots.push_back(Shot{});  // all-Unknown
        ++out.unrecognized;
        last_junk = true;
        terminal_seen = false;
    }
    // keep the "terminal only on the last shot" invariant for malformed tails
    for (size_t i = 0; i + 1 < out.shots.size(); ++i) {
        if (out.shots[i].terminal != Terminal::None) {
            out.shots[i].terminal = Terminal::None;
            ++out.unrecognized;
        }
    }
    return out;
}

// Splits a raw charted point string into (serve token, rally tail).
// If the string does not start with a placement digit the whole string is
// returned as the serve token; parse_serve will reject it downstream.
inline std::pair<std::string, std::string> split_point_code(std::string_view raw) {
    if (raw.empty() || !grammar::serve_direction(raw[0]))
        return {std::string(raw), std::string()};
    size_t i = 1;
    while (i < raw.size() && grammar::serve_fault(raw[i])) ++i;
    if (i < raw.size() && (raw[i] == '*' || raw[i] == '#')) ++i;
    return {std::string(raw.substr(0, i)), std::string(raw.substr(i))};
}

inline const char* to_string(ServeDirection d) {
    switch (d) {
        case ServeDirection::Wide: return "wide";
        case ServeDirection::Body: return "body";
        case ServeDirection::T: return "t";
        default: return "unknown";
    }
}

}  // namespace servepred
