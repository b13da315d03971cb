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
#include <optional>

#include "crl/sim/robot.hpp"
#include "crl/sim/track.hpp"

namespace crl::sim {

// Grayscale view of the ground patch ahead of the robot: 1.0 is bare floor,
// 0.0 is line. Row 0 is nearest the robot; column 0 is on the robot's left.
struct CameraFrame {
    static constexpr std::size_t kRows = 5;
    static constexpr std::size_t kCols = 100;

    std::array<double, kRows * kCols> pixels{};

    double& at(std::size_t row, std::size_t col) { return pixels[row * kCols + col]; }
    double at(std::size_t row, std::size_t col) const { return pixels[row * kCols + col]; }

    static CameraFrame blank();
    friend bool operator==(const CameraFrame&, const CameraFrame&) = default;
};

// Samples each pixel center on the ground plane; the pixel is dark when the
// sample lies within half a line width of the track center curve.
CameraFrame render(const Pose& pose, const Track& track, const RobotSpec& spec);

// Column of the line's left edge: per row, the leftmost pixel darker than
// 0.5; across rows, the median of the rows that see the line (lower median
// for an even count). Empty when no row sees the line.
std::optional<int> extract_deviation(const CameraFrame& frame);

// 0.5 - |(d - W/2) / (W/2)|, replaced by -1.0 for a lost line or the neutral
// action. Throws std::out_of_range for d outside [0, W].
double compute_reward(std::optional<int> deviation, const Action& action, int width = CameraFrame::kCols);

// (d - W/2) / (W/2), in [-1, 1].
double normalized_deviation(int deviation, int width = CameraFrame::kCols);

}  // namespace crl::sim
