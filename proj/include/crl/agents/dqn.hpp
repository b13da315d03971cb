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

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "crl/agents/state.hpp"
#include "crl/numerics/network.hpp"
#include "crl/replay/transition.hpp"
#include "crl/sim/camera.hpp"

namespace crl::agents {

// Keeps the k most recent camera frames; until k frames have arrived the
// missing slots repeat the oldest one. Encodes as (rows, cols, k), oldest
// frame in channel 0.
class FrameStack {
public:
    explicit FrameStack(std::size_t depth = 3);

    std::size_t depth() const { return depth_; }
    void reset(const sim::CameraFrame& first);
    void push(const sim::CameraFrame& frame);
    State encode() const;

private:
    std::size_t depth_;
    std::deque<sim::CameraFrame> frames_;
};

// Pixel stack -> network input tensor (values / 255).
numerics::Tensor state_tensor(const State& state, std::size_t depth);

enum class DqnAlgorithm { standard, double_q };

std::string to_string(DqnAlgorithm a);

struct DqnConfig {
    double learning_rate = 1e-2;
    double discount = 0.75;
    DqnAlgorithm algorithm = DqnAlgorithm::standard;
    std::size_t target_sync_period = 500;
    std::size_t frame_stack = 3;
    double huber_delta = 1.0;

    void validate() const;
};

struct DqnTarget {
    std::vector<double> values;
    std::size_t action = 0;
};

// Regression target for one transition: a copy of `predicted` with the
// taken action's entry replaced by r (terminal), r + gamma max_b Qtarget(s',b)
// (standard) or r + gamma Qtarget(s', argmax_b Qonline(s',b)) (double).
DqnTarget dqn_target(std::span<const double> predicted, std::size_t action, double reward, bool terminal,
                     std::span<const double> next_q_target, std::span<const double> next_q_online, double discount,
                     DqnAlgorithm algorithm);

// Copies online parameters into target when step is a multiple of period.
// Returns whether a copy happened.
bool sync_target(const numerics::Network& online, numerics::Network& target, std::size_t period, std::size_t step);

class DqnAgent : public replay::Learner {
public:
    DqnAgent(DqnConfig config, Rng& rng);
    DqnAgent(DqnConfig config, numerics::Network online);

    const DqnConfig& config() const { return config_; }
    const numerics::Network& online() const { return online_; }
    const numerics::Network& target() const { return target_; }
    numerics::Network& online() { return online_; }

    std::vector<double> q_values(const State& state) const;

    // Called once per environment step after learning.
    void end_step(std::size_t step) { sync_target(online_, target_, config_.target_sync_period, step); }

    std::size_t parameter_count() const override { return online_.parameters().total_count(); }
    double loss_gradient(const replay::Batch& batch, std::vector<double>& gradient) override;
    std::vector<double> sample_losses(const replay::Batch& batch) override;
    void apply_gradient(std::span<const double> gradient) override;

private:
    DqnTarget target_for(const replay::Transition& t, std::span<const double> predicted) const;

    DqnConfig config_;
    numerics::Network online_;
    numerics::Network target_;
    numerics::ParameterSet grad_buffer_;
};

}  // namespace crl::agents
