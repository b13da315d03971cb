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

#include "crl/sim/camera.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crl::sim {

CameraFrame CameraFrame::blank() {
    CameraFrame f;
    f.pixels.fill(1.0);
    return f;
}

CameraFrame render(const Pose& pose, const Track& track, const RobotSpec& spec) {
    CameraFrame frame;
    const double c = std::cos(pose.heading), s = std::sin(pose.heading);
    const double px = spec.camera_width_m / static_cast<double>(CameraFrame::kCols);
    const double half_width = 0.5 * track.line_width();
    for (std::size_t r = 0; r < CameraFrame::kRows; ++r) {
        const double ahead = spec.camera_offset +
                             spec.camera_depth_m * ((static_cast<double>(r) + 0.5) / CameraFrame::kRows - 0.5);
        for (std::size_t col = 0; col < CameraFrame::kCols; ++col) {
            const double lateral = (0.5 * CameraFrame::kCols - (static_cast<double>(col) + 0.5)) * px;
            const double x = pose.x + ahead * c - lateral * s;
            const double y = pose.y + ahead * s + lateral * c;
            frame.at(r, col) = track.distance(x, y) <= half_width ? 0.0 : 1.0;
        }
    }
    return frame;
}

std::optional<int> extract_deviation(const CameraFrame& frame) {
    std::vector<int> edges;
    for (std::size_t r = 0; r < CameraFrame::kRows; ++r)
        for (std::size_t col = 0; col < CameraFrame::kCols; ++col)
            if (frame.at(r, col) < 0.5) {
                edges.push_back(static_cast<int>(col));
                break;
            }
    if (edges.empty()) return std::nullopt;
    std::sort(edges.begin(), edges.end());
    return edges[(edges.size() - 1) / 2];
}

double compute_reward(std::optional<int> deviation, const Action& action, int width) {
    if (!deviation) return -1.0;
    if (*deviation < 0 || *deviation > width)
        throw std::out_of_range("deviation " + std::to_string(*deviation) + " outside [0, " + std::to_string(width) + "]");
    if (action.neutral()) return -1.0;
    return 0.5 - std::abs(normalized_deviation(*deviation, width));
}

double normalized_deviation(int deviation, int width) {
    const double half = 0.5 * width;
    return (deviation - half) / half;
}

}  // namespace crl::sim
