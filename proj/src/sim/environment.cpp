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

#include "crl/sim/environment.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crl::sim {

Pose reset_pose(const Track& track, const ResetDistribution& dist, Rng& rng) {
    Pose p = track.pose_at(dist.start_s);
    double offset = 0.5 * track.line_width();
    if (dist.lateral_noise > 0.0) offset += rng.uniform(-dist.lateral_noise, dist.lateral_noise);
    p.x -= offset * std::sin(p.heading);
    p.y += offset * std::cos(p.heading);
    return p;
}

Environment::Environment(Track track, RobotSpec spec, ResetDistribution reset, double dt)
    : track_(std::move(track)), spec_(spec), reset_(reset), dt_(dt) {
    spec_.validate();
    if (!(dt_ > 0.0)) throw std::invalid_argument("environment: dt must be positive");
    if (reset_.lateral_noise < 0.0) throw std::invalid_argument("environment: negative reset noise");
}

StepOutcome Environment::reset(Rng& rng) {
    pose_ = reset_pose(track_, reset_, rng);
    StepOutcome out;
    out.frame = render(pose_, track_, spec_);
    out.deviation = extract_deviation(out.frame);
    out.terminal = !out.deviation;
    if (out.terminal) throw std::runtime_error("reset pose does not see the line; reduce reset noise");
    return out;
}

StepOutcome Environment::step(ActionId id) {
    const Action& a = action(id);
    pose_ = sim::step(pose_, a, dt_, spec_.wheel_separation);
    return observe(a);
}

StepOutcome Environment::observe(const Action& a) const {
    StepOutcome out;
    out.frame = render(pose_, track_, spec_);
    out.deviation = extract_deviation(out.frame);
    out.terminal = !out.deviation;
    out.reward = compute_reward(out.deviation, a);
    if (!track_.closed() && !out.terminal) {
        const double reach = spec_.camera_offset + 0.5 * spec_.camera_depth_m;
        out.exhausted = track_.closest(pose_.x, pose_.y).s + reach >= track_.length();
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
    out << "step,x,y,heading,action_index,d,reward,terminal\n";
    std::ostringstream line;
    line.precision(17);
    for (const auto& r : rows) {
        line.str("");
        line << r.step << ',' << r.pose.x << ',' << r.pose.y << ',' << r.pose.heading << ',' << r.action_index << ',';
        if (r.deviation) line << *r.deviation;
        line << ',' << r.reward << ',' << (r.terminal ? 1 : 0) << '\n';
        out << line.str();
    }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
    std::vector<TrajectoryRow> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("step,", 0) != 0)
        throw std::runtime_error("trajectory csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw std::runtime_error("trajectory csv: expected 8 columns in '" + line + "'");
        TrajectoryRow r;
        r.step = std::stoull(f[0]);
        r.pose = {std::stod(f[1]), std::stod(f[2]), std::stod(f[3])};
        r.action_index = std::stoi(f[4]);
        if (!f[5].empty()) r.deviation = std::stoi(f[5]);
        r.reward = std::stod(f[6]);
        r.terminal = f[7] == "1";
        rows.push_back(r);
    }
    return rows;
}

}  // namespace crl::sim
