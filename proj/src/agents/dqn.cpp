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

#include "crl/agents/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crl/agents/exploration.hpp"
#include "crl/numerics/loss.hpp"

namespace crl::agents {

using numerics::Tensor;

FrameStack::FrameStack(std::size_t depth) : depth_(depth) {
    if (depth_ == 0) throw std::invalid_argument("frame stack depth must be positive");
}

void FrameStack::reset(const sim::CameraFrame& first) {
    frames_.clear();
    frames_.push_back(first);
}

void FrameStack::push(const sim::CameraFrame& frame) {
    frames_.push_back(frame);
    while (frames_.size() > depth_) frames_.pop_front();
}

State FrameStack::encode() const {
    if (frames_.empty()) throw std::logic_error("frame stack is empty; call reset() first");
    constexpr std::size_t pixels = sim::CameraFrame::kRows * sim::CameraFrame::kCols;
    State s;
    s.pixels.resize(pixels * depth_);
    const std::size_t missing = depth_ - frames_.size();
    for (std::size_t k = 0; k < depth_; ++k) {
        const auto& f = frames_[k < missing ? 0 : k - missing];
        for (std::size_t p = 0; p < pixels; ++p)
            s.pixels[p * depth_ + k] = static_cast<std::uint8_t>(std::lround(std::clamp(f.pixels[p], 0.0, 1.0) * 255.0));
    }
    return s;
}

Tensor state_tensor(const State& state, std::size_t depth) {
    const std::size_t expected = sim::CameraFrame::kRows * sim::CameraFrame::kCols * depth;
    if (state.pixels.size() != expected)
        throw numerics::ShapeError("state has " + std::to_string(state.pixels.size()) + " pixels, expected " +
                                   std::to_string(expected));
    Tensor t({sim::CameraFrame::kRows, sim::CameraFrame::kCols, depth});
    for (std::size_t i = 0; i < expected; ++i) t[i] = state.pixels[i] / 255.0;
    return t;
}

std::string to_string(DqnAlgorithm a) {
    return a == DqnAlgorithm::standard ? "original" : "double";
}

void DqnConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("dqn: learning rate must be positive");
    if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("dqn: discount must be in (0, 1)");
    if (target_sync_period == 0) throw std::invalid_argument("dqn: target sync period must be >= 1");
    if (frame_stack == 0) throw std::invalid_argument("dqn: frame stack must be >= 1");
    if (!(huber_delta > 0.0)) throw std::invalid_argument("dqn: huber delta must be positive");
}

DqnTarget dqn_target(std::span<const double> predicted, std::size_t action, double reward, bool terminal,
                     std::span<const double> next_q_target, std::span<const double> next_q_online, double discount,
                     DqnAlgorithm algorithm) {
    if (action >= predicted.size()) throw std::out_of_range("dqn_target: action out of range");
    DqnTarget t{{predicted.begin(), predicted.end()}, action};
    double value = reward;
    if (!terminal) {
        if (next_q_target.size() != predicted.size()) throw numerics::ShapeError("dqn_target: next-state size mismatch");
        if (algorithm == DqnAlgorithm::standard) {
            value += discount * next_q_target[argmax(next_q_target)];
        } else {
            if (next_q_online.size() != predicted.size())
                throw numerics::ShapeError("dqn_target: online next-state size mismatch");
            value += discount * next_q_target[argmax(next_q_online)];
        }
    }
    t.values[action] = value;
    return t;
}

bool sync_target(const numerics::Network& online, numerics::Network& target, std::size_t period, std::size_t step) {
    if (period == 0) throw std::invalid_argument("sync_target: period must be >= 1");
    if (step % period != 0) return false;
    target.set_parameters(online.parameters());
    return true;
}

DqnAgent::DqnAgent(DqnConfig config, Rng& rng) : config_(config) {
    config_.validate();
    online_ = numerics::Network(numerics::default_architecture(),
                                {sim::CameraFrame::kRows, sim::CameraFrame::kCols, config_.frame_stack});
    online_.initialize(rng);
    target_ = online_;
    grad_buffer_ = online_.parameters().zeros_like();
}

DqnAgent::DqnAgent(DqnConfig config, numerics::Network online) : config_(config), online_(std::move(online)) {
    config_.validate();
    target_ = online_;
    grad_buffer_ = online_.parameters().zeros_like();
}

std::vector<double> DqnAgent::q_values(const State& state) const {
    const Tensor out = online_.forward(state_tensor(state, config_.frame_stack));
    return {out.values().begin(), out.values().end()};
}

DqnTarget DqnAgent::target_for(const replay::Transition& t, std::span<const double> predicted) const {
    if (t.terminal) return dqn_target(predicted, t.action, t.reward, true, {}, {}, config_.discount, config_.algorithm);
    const Tensor next = state_tensor(t.next_state, config_.frame_stack);
    const Tensor next_target = target_.forward(next);
    Tensor next_online;
    if (config_.algorithm == DqnAlgorithm::double_q) next_online = online_.forward(next);
    return dqn_target(predicted, t.action, t.reward, false, next_target.values(), next_online.values(),
                      config_.discount, config_.algorithm);
}

double DqnAgent::loss_gradient(const replay::Batch& batch, std::vector<double>& gradient) {
    if (batch.empty()) throw std::invalid_argument("loss_gradient: empty batch");
    grad_buffer_.set_zero();
    const double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    numerics::ForwardTrace trace;
    for (const auto* t : batch) {
        const Tensor q = online_.forward(state_tensor(t->state, config_.frame_stack), trace);
        const DqnTarget target = target_for(*t, q.values());
        const auto l = numerics::huber_loss(q.values(), target.values, config_.huber_delta);
        loss += l.loss;
        Tensor upstream(q.shape());
        for (std::size_t i = 0; i < upstream.size(); ++i) upstream[i] = l.gradient[i] * scale;
        online_.backward(trace, upstream, grad_buffer_);
    }
    gradient = grad_buffer_.flatten();
    const double mean = loss * scale;
    if (!std::isfinite(mean)) throw numerics::NonFiniteError("non-finite dqn loss");
    return mean;
}

std::vector<double> DqnAgent::sample_losses(const replay::Batch& batch) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (const auto* t : batch) {
        const Tensor q = online_.forward(state_tensor(t->state, config_.frame_stack));
        const DqnTarget target = target_for(*t, q.values());
        out.push_back(numerics::huber_loss(q.values(), target.values, config_.huber_delta).loss);
    }
    return out;
}

void DqnAgent::apply_gradient(std::span<const double> gradient) {
    numerics::sgd_step(online_.parameters(), gradient, config_.learning_rate);
    if (!online_.parameters().all_finite()) throw numerics::NonFiniteError("non-finite network parameters after update");
}

}  // namespace crl::agents
