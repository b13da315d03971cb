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
#include <memory>
#include <string>
#include <vector>

#include "crl/agents/dqn.hpp"
#include "crl/agents/state.hpp"
#include "crl/agents/tabular.hpp"
#include "crl/harness/config.hpp"
#include "crl/numerics/network.hpp"
#include "crl/replay/strategies.hpp"
#include "crl/replay/transition.hpp"
#include "crl/rng.hpp"
#include "crl/sim/environment.hpp"

namespace crl::harness {

// Turns environment outcomes into agent states. Holds per-episode memory
// (the frame stack), so each rollout gets its own observer.
class Observer {
public:
    virtual ~Observer() = default;
    virtual agents::State reset(const sim::StepOutcome& first) = 0;
    virtual agents::State step(const sim::StepOutcome& outcome) = 0;
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual AgentKind kind() const = 0;
    virtual std::unique_ptr<Observer> make_observer() const = 0;
    virtual std::vector<double> q_values(const agents::State& state) const = 0;
    // Hash of every value that affects behavior; equal fingerprints mean an
    // unchanged policy.
    virtual std::string fingerprint() const = 0;
};

// Q-table lookup over deviation bins.
class TabularPolicy final : public Policy {
public:
    TabularPolicy(agents::QTable table, std::size_t bins) : table_(std::move(table)), bins_(bins) {}

    AgentKind kind() const override { return AgentKind::qtable; }
    std::unique_ptr<Observer> make_observer() const override;
    std::vector<double> q_values(const agents::State& state) const override;
    std::string fingerprint() const override;

    const agents::QTable& table() const { return table_; }
    std::size_t bins() const { return bins_; }

private:
    agents::QTable table_;
    std::size_t bins_;
};

// Q-network over stacked camera frames.
class NetworkPolicy final : public Policy {
public:
    NetworkPolicy(numerics::Network net, std::size_t frame_stack) : net_(std::move(net)), depth_(frame_stack) {}

    AgentKind kind() const override { return AgentKind::dqn; }
    std::unique_ptr<Observer> make_observer() const override;
    std::vector<double> q_values(const agents::State& state) const override;
    std::string fingerprint() const override;

    const numerics::Network& network() const { return net_; }
    std::size_t frame_stack() const { return depth_; }

private:
    numerics::Network net_;
    std::size_t depth_;
};

// A policy that also learns online.
class Agent : public Policy {
public:
    virtual void begin_subtask(int /*subtask*/, Rng& /*rng*/) {}
    virtual void learn(const replay::Transition& t, Rng& rng) = 0;
    // Called after learn() with the 1-based global iteration count.
    virtual void end_step(std::size_t /*iteration*/) {}
    // Copy of the current behavior that no longer changes.
    virtual std::unique_ptr<Policy> freeze() const = 0;
    virtual const replay::Strategy* strategy() const { return nullptr; }
};

class TabularAgent final : public Agent {
public:
    TabularAgent(agents::QTableConfig config, Rng& rng) : agent_(config, rng) {}

    AgentKind kind() const override { return AgentKind::qtable; }
    std::unique_ptr<Observer> make_observer() const override;
    std::vector<double> q_values(const agents::State& state) const override;
    std::string fingerprint() const override;
    void learn(const replay::Transition& t, Rng& rng) override;
    std::unique_ptr<Policy> freeze() const override;

    const agents::QTableAgent& inner() const { return agent_; }

private:
    agents::QTableAgent agent_;
};

class DeepAgent final : public Agent {
public:
    DeepAgent(agents::DqnConfig config, const replay::StrategyConfig& strategy, Rng& rng)
        : agent_(config, rng), strategy_(replay::make_strategy(strategy)) {}

    AgentKind kind() const override { return AgentKind::dqn; }
    std::unique_ptr<Observer> make_observer() const override;
    std::vector<double> q_values(const agents::State& state) const override;
    std::string fingerprint() const override;
    void begin_subtask(int subtask, Rng& rng) override { strategy_->begin_subtask(subtask, rng); }
    void learn(const replay::Transition& t, Rng& rng) override { strategy_->observe(t, agent_, rng); }
    void end_step(std::size_t iteration) override { agent_.end_step(iteration); }
    std::unique_ptr<Policy> freeze() const override;
    const replay::Strategy* strategy() const override { return strategy_.get(); }

    const agents::DqnAgent& inner() const { return agent_; }

private:
    agents::DqnAgent agent_;
    std::unique_ptr<replay::Strategy> strategy_;
};

std::unique_ptr<Agent> make_agent(const RunConfig& config, Rng& rng);

}  // namespace crl::harness
