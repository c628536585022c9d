// court_geometry.hpp - zone map of one half court and the per-point run index
//
// Each player is tracked in their own half-court frame: x in [0, 10.97] m
// laterally (deuce side toward high x when facing the net), y in [0, 11.89] m
// from the net (0) to the baseline (11.89). A 3x3 zone grid covers the half:
//
//   lateral centers: ad-wide W/6, center W/2, deuce-wide 5W/6
//   depth centers:   net zone D/6, midcourt D/2, baseline 5D/6
//
// A hitter's position for a rally shot is the zone implied by the opponent's
// previous shot (direction picks the lateral zone, depth picks the depth
// zone; volleys, half-volleys and overheads pull the hitter to the net zone).
// Unknown direction or depth leaves the corresponding coordinate unchanged,
// so an all-unknown shot adds no distance. The serve contact point is fixed
// per serving side, and the returner moves from a fixed stance to a contact
// point decided by the serve direction. After the last shot each player adds
// a recovery displacement of half their last movement.
#pragma once

#include <cmath>
#include <vector>

#include "servepred/notation.hpp"
#include "servepred/score_engine.hpp"

namespace servepred {

constexpr double kHalfCourtWidth = 10.97;   // m, doubles lines included
constexpr double kHalfCourtDepth = 11.89;   // m, net to baseline

struct Vec2 {
    double x = 0, y = 0;
};

inline double distance(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class LateralZone { DeuceWide, Center, AdWide };
enum class DepthZone { Baseline, Midcourt, NetZone };

struct CourtPosition {
    LateralZone lateral = LateralZone::Center;
    DepthZone depth = DepthZone::Baseline;
    Vec2 coordinates;
};

namespace court {

constexpr double W = kHalfCourtWidth;
constexpr double D = kHalfCourtDepth;

inline double lateral_x(LateralZone z) {
    switch (z) {
        case LateralZone::AdWide: return W / 6.0;
        case LateralZone::Center: return W / 2.0;
        case LateralZone::DeuceWide: return 5.0 * W / 6.0;
    }
    return W / 2.0;
}

inline double depth_y(DepthZone z) {
    switch (z) {
        case DepthZone::NetZone: return D / 6.0;
        case DepthZone::Midcourt: return D / 2.0;
        case DepthZone::Baseline: return 5.0 * D / 6.0;
    }
    return 5.0 * D / 6.0;
}

// x-mirror for the ad side; the deuce side is the reference frame
inline double side_x(ServingSide side, double deuce_x) {
    return side == ServingSide::Deuce ? deuce_x : W - deuce_x;
}

}  // namespace court

inline CourtPosition zone_position(LateralZone lat, DepthZone dep) {
    return {lat, dep, {court::lateral_x(lat), court::depth_y(dep)}};
}

// Server stands at the baseline, one meter to the serving side of the
// center mark.
inline Vec2 serve_contact(ServingSide side) {
    return {court::side_x(side, court::W / 2.0 + 1.0), court::D};
}

// Returner waits in the wide-baseline zone of the receiving side.
inline Vec2 return_stance(ServingSide side) {
    return {court::side_x(side, court::lateral_x(LateralZone::DeuceWide)),
            court::depth_y(DepthZone::Baseline)};
}

// Contact point the serve direction forces on the returner. A body serve
// jams the returner in the stance; an unknown direction leaves it there too.
inline Vec2 return_contact(ServingSide side, ServeDirection dir) {
    double base = court::depth_y(DepthZone::Baseline);
    switch (dir) {
        case ServeDirection::Wide: return {court::side_x(side, court::W), base};
        case ServeDirection::T:
            return {court::lateral_x(LateralZone::Center), base};
        case ServeDirection::Body:
        default:
            return return_stance(side);
    }
}

struct RunPair {
    double server = 0;
    double returner = 0;
};

// Estimated meters run by each player during one point. The rally list holds
// the shots after the serve; shot 0 is the return (serve counts as shot 1 by
// the server, so the server hits the odd shots).
inline RunPair run_index_point(const ServePlacement& serve,
                               const std::vector<Shot>& rally, ServingSide side) {
    Vec2 pos[2] = {serve_contact(side), return_stance(side)};  // [0]=server
    double run[2] = {0, 0};
    double last_move[2] = {0, 0};

    auto move_to = [&](int who, Vec2 target) {
        double d = distance(pos[who], target);
        if (d > 0) {
            run[who] += d;
            last_move[who] = d;
            pos[who] = target;
        }
    };

    for (size_t i = 0; i < rally.size(); ++i) {
        int hitter = i % 2 == 0 ? 1 : 0;  // rally[0] is the returner's shot
        Vec2 target = pos[hitter];
        if (i == 0) {
            target = return_contact(side, serve.direction);
        } else {
            const Shot& prev = rally[i - 1];
            switch (prev.direction) {
                case ShotDirection::ToDeuceSide:
                    target.x = court::lateral_x(LateralZone::DeuceWide);
                    break;
                case ShotDirection::ToMiddle:
                    target.x = court::lateral_x(LateralZone::Center);
                    break;
                case ShotDirection::ToAdSide:
                    target.x = court::lateral_x(LateralZone::AdWide);
                    break;
                case ShotDirection::Unknown: break;
            }
            switch (prev.depth) {
                case ShotDepth::Shallow: target.y = court::depth_y(DepthZone::Midcourt); break;
                case ShotDepth::Deep: target.y = court::depth_y(DepthZone::Baseline); break;
                case ShotDepth::Unknown: break;
            }
        }
        const ShotKind k = rally[i].kind;
        if (k == ShotKind::Volley || k == ShotKind::HalfVolley || k == ShotKind::Overhead)
            target.y = court::depth_y(DepthZone::NetZone);
        move_to(hitter, target);
    }

    // recovery toward a ready position: half of the last displacement
    run[0] += 0.5 * last_move[0];
    run[1] += 0.5 * last_move[1];
    return {run[0], run[1]};
}

}  // namespace servepred
