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

#include <iosfwd>
#include <optional>
#include <vector>

#include "crl/rng.hpp"
#include "crl/sim/camera.hpp"
#include "crl/sim/robot.hpp"
#include "crl/sim/track.hpp"

namespace crl::sim {

// Reset places the robot at arc length `start_s` on the track, shifted
// sideways so the line's left edge sits under the image center, plus a
// uniform lateral offset in [-lateral_noise, lateral_noise] meters.
struct ResetDistribution {
    double start_s = 0.0;
    double lateral_noise = 0.0;
};

Pose reset_pose(const Track& track, const ResetDistribution& dist, Rng& rng);

struct StepOutcome {
    CameraFrame frame;
    std::optional<int> deviation;
    double reward = 0.0;
    bool terminal = false;   // line lost; always equals !deviation
    bool exhausted = false;  // reached the far end of an open track; not a failure
};

inline constexpr double kControlPeriod = 0.2;  // 5 Hz

class Environment {
public:
    explicit Environment(Track track, RobotSpec spec = {}, ResetDistribution reset = {},
                         double dt = kControlPeriod);

    StepOutcome reset(Rng& rng);
    StepOutcome step(ActionId action);

    const Pose& pose() const { return pose_; }
    void set_pose(const Pose& pose) { pose_ = pose; }
    const Track& track() const { return track_; }
    const RobotSpec& robot() const { return spec_; }
    const ResetDistribution& reset_distribution() const { return reset_; }
    double dt() const { return dt_; }

    // Environment shift: swaps the racetrack. The next call must be reset().
    void set_track(Track track) { track_ = std::move(track); }

private:
    StepOutcome observe(const Action& action) const;

    Track track_;
    RobotSpec spec_;
    ResetDistribution reset_;
    double dt_;
    Pose pose_;
};

struct TrajectoryRow {
    std::size_t step = 0;
    Pose pose;
    int action_index = 0;  // 1-based label
    std::optional<int> deviation;
    double reward = 0.0;
    bool terminal = false;
};

// CSV columns: step,x,y,heading,action_index,d,reward,terminal
// (d empty when the line is lost).
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

}  // namespace crl::sim
