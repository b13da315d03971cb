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

#include "crl/harness/policy.hpp"

#include <stdexcept>

namespace crl::harness {

namespace {

std::string fingerprint_of(const std::vector<double>& values) {
    return fnv1a_hex(std::string(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(double)));
}

class BinObserver final : public Observer {
public:
    explicit BinObserver(std::size_t bins) : bins_(bins) {}
    agents::State reset(const sim::StepOutcome& first) override { return encode(first); }
    agents::State step(const sim::StepOutcome& outcome) override { return encode(outcome); }

private:
    agents::State encode(const sim::StepOutcome& o) const {
        agents::State s;
        // A lost line is terminal, so its index never feeds a bootstrap.
        s.index = o.deviation ? static_cast<std::uint32_t>(agents::discretize(*o.deviation, sim::CameraFrame::kCols, bins_))
                              : 0;
        return s;
    }
    std::size_t bins_;
};

class StackObserver final : public Observer {
public:
    explicit StackObserver(std::size_t depth) : stack_(depth) {}
    agents::State reset(const sim::StepOutcome& first) override {
        stack_.reset(first.frame);
        return stack_.encode();
    }
    agents::State step(const sim::StepOutcome& outcome) override {
        stack_.push(outcome.frame);
        return stack_.encode();
    }

private:
    agents::FrameStack stack_;
};

std::vector<double> row_of(const agents::QTable& q, const agents::State& s) {
    const auto r = q.row(s.index);
    return {r.begin(), r.end()};
}

std::vector<double> network_q(const numerics::Network& net, const agents::State& s, std::size_t depth) {
    const numerics::Tensor out = net.forward(agents::state_tensor(s, depth));
    const auto v = out.values();
    return {v.begin(), v.end()};
}

}  // namespace

std::unique_ptr<Observer> TabularPolicy::make_observer() const { return std::make_unique<BinObserver>(bins_); }
std::vector<double> TabularPolicy::q_values(const agents::State& state) const { return row_of(table_, state); }
std::string TabularPolicy::fingerprint() const { return fingerprint_of(table_.values()); }

std::unique_ptr<Observer> NetworkPolicy::make_observer() const { return std::make_unique<StackObserver>(depth_); }
std::vector<double> NetworkPolicy::q_values(const agents::State& state) const {
    return network_q(net_, state, depth_);
}
std::string NetworkPolicy::fingerprint() const { return fingerprint_of(net_.parameters().flatten()); }

std::unique_ptr<Observer> TabularAgent::make_observer() const {
    return std::make_unique<BinObserver>(agent_.config().bins);
}
std::vector<double> TabularAgent::q_values(const agents::State& state) const {
    return row_of(agent_.table(), state);
}
std::string TabularAgent::fingerprint() const { return fingerprint_of(agent_.table().values()); }

void TabularAgent::learn(const replay::Transition& t, Rng&) {
    agent_.update(t.state.index, t.action, t.reward, t.next_state.index, t.terminal);
}

std::unique_ptr<Policy> TabularAgent::freeze() const {
    return std::make_unique<TabularPolicy>(agent_.table(), agent_.config().bins);
}

std::unique_ptr<Observer> DeepAgent::make_observer() const {
    return std::make_unique<StackObserver>(agent_.config().frame_stack);
}
std::vector<double> DeepAgent::q_values(const agents::State& state) const { return agent_.q_values(state); }
std::string DeepAgent::fingerprint() const { return fingerprint_of(agent_.online().parameters().flatten()); }

std::unique_ptr<Policy> DeepAgent::freeze() const {
    return std::make_unique<NetworkPolicy>(agent_.online(), agent_.config().frame_stack);
}

std::unique_ptr<Agent> make_agent(const RunConfig& config, Rng& rng) {
    config.validate();
    if (config.agent == AgentKind::qtable) {
        agents::QTableConfig q;
        q.bins = config.state_bins;
        q.learning_rate = config.learning_rate;
        q.discount = config.discount_factor;
        q.rule = config.algorithm == "speedy" ? agents::TabularRule::speedy : agents::TabularRule::original;
        q.init_scale = config.qtable_init_scale;
        return std::make_unique<TabularAgent>(q, rng);
    }
    agents::DqnConfig d;
    d.learning_rate = config.learning_rate;
    d.discount = config.discount_factor;
    d.algorithm = config.algorithm == "double" ? agents::DqnAlgorithm::double_q : agents::DqnAlgorithm::standard;
    d.target_sync_period = config.target_sync_period;
    d.frame_stack = config.frame_stack;
    d.huber_delta = config.huber_delta;
    return std::make_unique<DeepAgent>(d, config.strategy, rng);
}

}  // namespace crl::harness
