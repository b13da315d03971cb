// Copyright (c) 2026 The crlbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crl/sim/track.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace crl::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDefaultLineWidth = 0.015;

double wrap_positive(double a) {
    a = std::fmod(a, 2.0 * kPi);
    return a < 0.0 ? a + 2.0 * kPi : a;
}

}  // namespace

Track::Track(std::vector<Segment> segments, double line_width, bool closed, std::string name)
    : name_(std::move(name)), segments_(std::move(segments)), line_width_(line_width), closed_(closed) {
    if (segments_.empty()) throw TrackError("track needs at least one segment");
    if (!(line_width_ > 0.0)) throw TrackError("line width must be positive");

    Pose cursor;
    for (const auto& seg : segments_) {
        Piece p;
        p.start = cursor;
        p.s0 = total_length_;
        if (const auto* st = std::get_if<Straight>(&seg)) {
            if (!(st->length > 0.0)) throw TrackError("straight segment length must be positive");
            p.length = st->length;
            cursor.x += st->length * std::cos(cursor.heading);
            cursor.y += st->length * std::sin(cursor.heading);
        } else {
            const auto& arc = std::get<Arc>(seg);
            if (!(arc.radius > 0.0) || !(arc.sweep > 0.0)) throw TrackError("arc radius and sweep must be positive");
            if (arc.radius < line_width_) throw TrackError("arc radius smaller than the line width");
            if (arc.sweep >= 2.0 * kPi) throw TrackError("arc sweep must be below a full turn");
            p.arc = true;
            p.radius = arc.radius;
            p.sweep = arc.sweep;
            p.turn = arc.direction == TurnDirection::left ? 1.0 : -1.0;
            p.length = arc.radius * arc.sweep;
            // Center lies on the turn side of the heading.
            p.cx = cursor.x - p.turn * arc.radius * std::sin(cursor.heading);
            p.cy = cursor.y + p.turn * arc.radius * std::cos(cursor.heading);
            p.phi0 = std::atan2(cursor.y - p.cy, cursor.x - p.cx);
            const double phi1 = p.phi0 + p.turn * arc.sweep;
            cursor.x = p.cx + arc.radius * std::cos(phi1);
            cursor.y = p.cy + arc.radius * std::sin(phi1);
            cursor.heading = normalize_angle(cursor.heading + p.turn * arc.sweep);
        }
        total_length_ += p.length;
        pieces_.push_back(p);
    }
    validate(cursor);
}

// `end` is the pose after the last segment; pose_at would wrap it to the start.
void Track::validate(const Pose& end) const {
    if (closed_) {
        const Pose start = pieces_.front().start;
        const double gap = std::hypot(end.x - start.x, end.y - start.y);
        const double turn = std::abs(normalize_angle(end.heading - start.heading));
        if (gap > 1e-6 || turn > 1e-6)
            throw TrackError("closed track does not close: gap " + std::to_string(gap) + " m, heading error " +
                             std::to_string(turn) + " rad");
    }
    const double d = min_self_distance();
    if (!(d > line_width_))
        throw TrackError("track '" + name_ + "' comes within " + std::to_string(d) + " m of itself");
}

Pose Track::pose_at(double s) const {
    if (closed_) {
        s = std::fmod(s, total_length_);
        if (s < 0.0) s += total_length_;
    } else {
        s = std::clamp(s, 0.0, total_length_);
    }
    // Last piece whose start is <= s.
    std::size_t i = 0;
    while (i + 1 < pieces_.size() && pieces_[i + 1].s0 <= s) ++i;
    const Piece& p = pieces_[i];
    const double u = std::min(s - p.s0, p.length);
    Pose out;
    if (!p.arc) {
        out.x = p.start.x + u * std::cos(p.start.heading);
        out.y = p.start.y + u * std::sin(p.start.heading);
        out.heading = p.start.heading;
    } else {
        const double phi = p.phi0 + p.turn * u / p.radius;
        out.x = p.cx + p.radius * std::cos(phi);
        out.y = p.cy + p.radius * std::sin(phi);
        out.heading = normalize_angle(p.start.heading + p.turn * u / p.radius);
    }
    return out;
}

TrackPoint Track::closest(double x, double y) const {
    TrackPoint best{std::numeric_limits<double>::infinity(), 0.0};
    for (const auto& p : pieces_) {
        TrackPoint tp;
        if (!p.arc) {
            const double ux = std::cos(p.start.heading), uy = std::sin(p.start.heading);
            const double t = std::clamp((x - p.start.x) * ux + (y - p.start.y) * uy, 0.0, p.length);
            tp.distance = std::hypot(x - (p.start.x + t * ux), y - (p.start.y + t * uy));
            tp.s = p.s0 + t;
        } else {
            const double dx = x - p.cx, dy = y - p.cy;
            const double rho = std::hypot(dx, dy);
            const double delta = rho > 0.0 ? wrap_positive(p.turn * (std::atan2(dy, dx) - p.phi0)) : 0.0;
            if (delta <= p.sweep) {
                tp.distance = std::abs(rho - p.radius);
                tp.s = p.s0 + delta * p.radius;
            } else {
                const double ex = p.cx + p.radius * std::cos(p.phi0 + p.turn * p.sweep);
                const double ey = p.cy + p.radius * std::sin(p.phi0 + p.turn * p.sweep);
                const double d_start = std::hypot(x - p.start.x, y - p.start.y);
                const double d_end = std::hypot(x - ex, y - ey);
                tp = d_start <= d_end ? TrackPoint{d_start, p.s0} : TrackPoint{d_end, p.s0 + p.length};
            }
        }
        if (tp.distance < best.distance) best = tp;
    }
    return best;
}

double Track::min_self_distance() const {
    const double spacing = std::max(0.5 * line_width_, total_length_ / 400000.0);
    const double cell = std::max(line_width_, spacing);
    const double min_separation = 2.0 * line_width_;
    const std::size_t n = static_cast<std::size_t>(std::ceil(total_length_ / spacing)) + 1;

    std::vector<double> xs(n), ys(n), ss(n);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    auto key = [](std::int64_t gx, std::int64_t gy) {
        return (static_cast<std::uint64_t>(gx) << 32) ^ static_cast<std::uint64_t>(gy & 0xffffffff);
    };
    for (std::size_t i = 0; i < n; ++i) {
        ss[i] = std::min(static_cast<double>(i) * spacing, total_length_);
        const Pose p = pose_at(ss[i]);
        xs[i] = p.x;
        ys[i] = p.y;
        grid[key(static_cast<std::int64_t>(std::floor(p.x / cell)), static_cast<std::int64_t>(std::floor(p.y / cell)))]
            .push_back(static_cast<std::uint32_t>(i));
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto gx = static_cast<std::int64_t>(std::floor(xs[i] / cell));
        const auto gy = static_cast<std::int64_t>(std::floor(ys[i] / cell));
        for (std::int64_t ox = -1; ox <= 1; ++ox)
            for (std::int64_t oy = -1; oy <= 1; ++oy) {
                auto it = grid.find(key(gx + ox, gy + oy));
                if (it == grid.end()) continue;
                for (std::uint32_t j : it->second) {
                    if (j <= i) continue;
                    double sep = ss[j] - ss[i];
                    if (closed_) sep = std::min(sep, total_length_ - sep);
                    if (sep <= min_separation) continue;
                    best = std::min(best, std::hypot(xs[i] - xs[j], ys[i] - ys[j]));
                }
            }
    }
    return best;
}

bool Track::has_left_turns() const {
    for (const auto& s : segments_)
        if (const auto* a = std::get_if<Arc>(&s); a && a->direction == TurnDirection::left) return true;
    return false;
}

bool Track::has_right_turns() const {
    for (const auto& s : segments_)
        if (const auto* a = std::get_if<Arc>(&s); a && a->direction == TurnDirection::right) return true;
    return false;
}

Track Track::build(const std::string& name) {
    if (name == "straight") {
        // 50,000 steps at 0.1 m/s and 5 Hz cover at most 1,000 m.
        return Track({Straight{1200.0}}, kDefaultLineWidth, false, name);
    }
    if (name == "zero") {
        // Stadium loop, every curve to the left.
        return Track({Straight{3.0}, Arc{0.5, kPi, TurnDirection::left}, Straight{3.0},
                      Arc{0.5, kPi, TurnDirection::left}},
                     kDefaultLineWidth, true, name);
    }
    if (name == "slalom") {
        // Stadium loop whose long sides carry an outward S-chicane.
        const std::vector<Segment> chicane{
            Arc{0.5, kPi / 2, TurnDirection::right}, Arc{0.5, kPi / 2, TurnDirection::left},
            Arc{0.5, kPi / 2, TurnDirection::left}, Arc{0.5, kPi / 2, TurnDirection::right}};
        std::vector<Segment> segs;
        for (int side = 0; side < 2; ++side) {
            segs.push_back(Straight{1.0});
            segs.insert(segs.end(), chicane.begin(), chicane.end());
            segs.push_back(Straight{1.0});
            segs.push_back(Arc{0.5, kPi, TurnDirection::left});
        }
        return Track(std::move(segs), kDefaultLineWidth, true, name);
    }
    throw TrackError("unknown track '" + name + "' (expected straight, zero or slalom)");
}

Track Track::from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw TrackError(std::string("track file: ") + e.what());
    }
    std::vector<Segment> segs;
    for (const auto& s : j.at("segments")) {
        const std::string type = s.at("type");
        if (type == "straight") {
            segs.push_back(Straight{s.at("length").get<double>()});
        } else if (type == "arc") {
            const std::string dir = s.at("direction");
            if (dir != "left" && dir != "right") throw TrackError("arc direction must be left or right");
            segs.push_back(Arc{s.at("radius").get<double>(), s.at("sweep").get<double>(),
                               dir == "left" ? TurnDirection::left : TurnDirection::right});
        } else {
            throw TrackError("unknown segment type '" + type + "'");
        }
    }
    return Track(std::move(segs), j.value("line_width", kDefaultLineWidth), j.value("closed", false),
                 j.value("name", std::string("custom")));
}

Track Track::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw TrackError("cannot open track file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string Track::to_json() const {
    using nlohmann::json;
    json j;
    j["name"] = name_;
    j["line_width"] = line_width_;
    j["closed"] = closed_;
    j["segments"] = json::array();
    for (const auto& s : segments_) {
        if (const auto* st = std::get_if<Straight>(&s)) {
            j["segments"].push_back({{"type", "straight"}, {"length", st->length}});
        } else {
            const auto& a = std::get<Arc>(s);
            j["segments"].push_back({{"type", "arc"},
                                     {"radius", a.radius},
                                     {"sweep", a.sweep},
                                     {"direction", a.direction == TurnDirection::left ? "left" : "right"}});
        }
    }
    return j.dump(2);
}

}  // namespace crl::sim
