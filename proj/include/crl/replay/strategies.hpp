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

#include "crl/rng.hpp"
#include "crl/replay/buffers.hpp"
#include "crl/replay/transition.hpp"

namespace crl::replay {

enum class StrategyKind { none, er, gem, agem, nsr };

std::string to_string(StrategyKind k);
StrategyKind strategy_kind_from_string(const std::string& name);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::none;
    std::size_t buffer_size = 10000;
    std::size_t batch_size = 8;            // ER mini-batch
    std::size_t reference_batch_size = 4;  // per reference gradient, GEM / A-GEM
    double memory_strength = 0.5;          // GEM lower bound on the dual variables
    double replay_ratio = 1.0;             // NSR+
    std::size_t nsr_refresh_period = 100;  // steps between re-evaluations of the NSR+ buffer
    std::size_t repeat_update = 1;         // gradient steps per environment step

    void validate() const;
};

struct StrategyStats {
    std::size_t updates = 0;
    std::size_t projections = 0;
    std::size_t fallbacks = 0;
    std::size_t refreshes = 0;
};

// Per-step learning hook shared by every replay method: the harness hands
// each new transition to observe(), which decides what to store and which
// gradient steps to take on the learner.
class Strategy {
public:
    virtual ~Strategy() = default;

    virtual StrategyKind kind() const = 0;
    virtual void begin_subtask(int /*subtask*/, Rng& /*rng*/) {}
    virtual void observe(const Transition& t, Learner& learner, Rng& rng) = 0;
    // Current memory contents, for dumps and inspection.
    virtual std::vector<const Transition*> memory() const { return {}; }

    const StrategyStats& stats() const { return stats_; }

protected:
    StrategyStats stats_;
};

// Plain online learning on the newest transition.
class OnlineStrategy final : public Strategy {
public:
    explicit OnlineStrategy(StrategyConfig config) : config_(config) {}
    StrategyKind kind() const override { return StrategyKind::none; }
    void observe(const Transition& t, Learner& learner, Rng& rng) override;

private:
    StrategyConfig config_;
};

// Reservoir buffer, uniform mini-batches.
class ExperienceReplay final : public Strategy {
public:
    explicit ExperienceReplay(StrategyConfig config) : config_(config), buffer_(config.buffer_size) {}
    StrategyKind kind() const override { return StrategyKind::er; }
    void observe(const Transition& t, Learner& learner, Rng& rng) override;
    std::vector<const Transition*> memory() const override;
    const ReservoirBuffer<Transition>& buffer() const { return buffer_; }

private:
    StrategyConfig config_;
    ReservoirBuffer<Transition> buffer_;
};

// GEM (one reference gradient per partition, dual QP) or A-GEM (one
// reference gradient from a batch over all partitions).
class EpisodicMemory final : public Strategy {
public:
    explicit EpisodicMemory(StrategyConfig config) : config_(config), buffer_(config.buffer_size) {}
    StrategyKind kind() const override { return config_.kind; }
    void begin_subtask(int subtask, Rng& rng) override;
    void observe(const Transition& t, Learner& learner, Rng& rng) override;
    std::vector<const Transition*> memory() const override { return buffer_.all(); }
    const PartitionedBuffer& buffer() const { return buffer_; }

private:
    StrategyConfig config_;
    PartitionedBuffer buffer_;
    int subtask_ = 1;
};

// NSR+: keep the worst-performing transitions, replay them next to the
// current one.
class WorstSampleRehearsal final : public Strategy {
public:
    explicit WorstSampleRehearsal(StrategyConfig config) : config_(config), buffer_(config.buffer_size) {}
    StrategyKind kind() const override { return StrategyKind::nsr; }
    void observe(const Transition& t, Learner& learner, Rng& rng) override;
    std::vector<const Transition*> memory() const override { return buffer_.items(); }
    const WorstBuffer& buffer() const { return buffer_; }

private:
    StrategyConfig config_;
    WorstBuffer buffer_;
    std::size_t steps_ = 0;
};

std::unique_ptr<Strategy> make_strategy(const StrategyConfig& config);

}  // namespace crl::replay
