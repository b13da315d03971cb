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

#include <array>
#include <cstddef>
#include <string>

namespace crl::sim {

// Differential-drive robot modelled on the Pololu 3pi. Lengths in meters.
struct RobotSpec {
    double wheel_radius = 0.0155;
    double wheel_separation = 0.09;
    double camera_offset = 0.05;   // patch center ahead of the axle midpoint
    double camera_width_m = 0.10;  // lateral extent of the ground patch
    double camera_depth_m = 0.025; // longitudinal extent of the ground patch
    double mass_kg = 0.135;        // recorded only; the simulator is kinematic

    void validate() const;
};

enum class ActionCategory { straight, left, right };

std::string to_string(ActionCategory c);

// Zero-based position in the action table; Action::index is the 1-based label.
using ActionId = std::size_t;
inline constexpr std::size_t kActionCount = 9;
inline constexpr ActionId kNeutralAction = 0;

struct Action {
    int index;          // 1..9
    double left_speed;  // m/s
    double right_speed; // m/s
    ActionCategory category;

    bool neutral() const { return left_speed == 0.0 && right_speed == 0.0; }
};

// The nine wheel-speed pairs; entry 0 (label 1) is the neutral action.
const std::array<Action, kActionCount>& action_table();
const Action& action(ActionId id);

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // radians in (-pi, pi]
};

double normalize_angle(double a);

// Unicycle integration over dt seconds with v = (l + r) / 2 and
// omega = (r - l) / wheel_separation. Exact circular-arc update.
Pose step(const Pose& pose, const Action& action, double dt, double wheel_separation);

}  // namespace crl::sim
