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

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "crl/sim/robot.hpp"

namespace crl::sim {

void RobotSpec::validate() const {
    if (!(wheel_radius > 0 && wheel_separation > 0 && camera_offset > 0 && camera_width_m > 0 && camera_depth_m > 0))
        throw std::invalid_argument("robot spec: all dimensions must be positive");
}

std::string to_string(ActionCategory c) {
    switch (c) {
        case ActionCategory::straight: return "straight";
        case ActionCategory::left: return "left";
        case ActionCategory::right: return "right";
    }
    return "?";
}

const std::array<Action, kActionCount>& action_table() {
    static const std::array<Action, kActionCount> table{{
        {1, 0.00, 0.00, ActionCategory::straight},
        {2, 0.05, 0.05, ActionCategory::straight},
        {3, 0.10, 0.10, ActionCategory::straight},
        {4, 0.00, 0.05, ActionCategory::left},
        {5, 0.00, 0.10, ActionCategory::left},
        {6, 0.05, 0.10, ActionCategory::left},
        {7, 0.05, 0.00, ActionCategory::right},
        {8, 0.10, 0.00, ActionCategory::right},
        {9, 0.10, 0.05, ActionCategory::right},
    }};
    return table;
}

const Action& action(ActionId id) {
    if (id >= kActionCount) throw std::out_of_range("action id " + std::to_string(id) + " out of range");
    return action_table()[id];
}

double normalize_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

Pose step(const Pose& pose, const Action& action, double dt, double wheel_separation) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double v = 0.5 * (action.left_speed + action.right_speed);
    const double omega = (action.right_speed - action.left_speed) / wheel_separation;
    Pose next = pose;
    if (omega == 0.0) {
        next.x += v * std::cos(pose.heading) * dt;
        next.y += v * std::sin(pose.heading) * dt;
        return next;
    }
    const double radius = v / omega;
    const double heading = pose.heading + omega * dt;
    next.x += radius * (std::sin(heading) - std::sin(pose.heading));
    next.y -= radius * (std::cos(heading) - std::cos(pose.heading));
    next.heading = normalize_angle(heading);
    return next;
}

}  // namespace crl::sim
