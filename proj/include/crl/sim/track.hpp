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

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "crl/sim/robot.hpp"

namespace crl::sim {

enum class TurnDirection { left, right };

struct Straight {
    double length = 0.0;
};

struct Arc {
    double radius = 0.0;
    double sweep = 0.0;  // radians, positive
    TurnDirection direction = TurnDirection::left;
};

using Segment = std::variant<Straight, Arc>;

struct TrackPoint {
    double distance = 0.0;  // to the line's center curve
    double s = 0.0;         // arc length of the closest center-curve point
};

class TrackError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A line painted on the ground plane: a chain of tangent-continuous
// segments starting at the origin heading along +x.
class Track {
public:
    Track(std::vector<Segment> segments, double line_width, bool closed, std::string name = "custom");

    // Canonical racetracks: "straight", "zero", "slalom".
    static Track build(const std::string& name);
    static Track from_json(const std::string& text);
    static Track load(const std::filesystem::path& path);
    std::string to_json() const;

    const std::string& name() const { return name_; }
    const std::vector<Segment>& segments() const { return segments_; }
    double line_width() const { return line_width_; }
    bool closed() const { return closed_; }
    double length() const { return total_length_; }

    // Pose on the center curve at arc length s, heading along the track.
    Pose pose_at(double s) const;
    TrackPoint closest(double x, double y) const;
    double distance(double x, double y) const { return closest(x, y).distance; }
    // Sampled minimum distance between points more than 2 line widths
    // apart along the curve.
    double min_self_distance() const;

    bool has_left_turns() const;
    bool has_right_turns() const;

private:
    struct Piece {
        Pose start;
        double s0 = 0.0;
        double length = 0.0;
        bool arc = false;
        double cx = 0.0, cy = 0.0;  // arc center
        double radius = 0.0;
        double phi0 = 0.0;          // polar angle of the start point about the center
        double turn = 1.0;          // +1 left, -1 right
        double sweep = 0.0;
    };

    void validate(const Pose& end) const;

    std::string name_;
    std::vector<Segment> segments_;
    std::vector<Piece> pieces_;
    double line_width_;
    bool closed_;
    double total_length_ = 0.0;
};

}  // namespace crl::sim
