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

#include "crl/replay/strategies.hpp"

#include <stdexcept>

#include "crl/replay/projection.hpp"

namespace crl::replay {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::none: return "none";
        case StrategyKind::er: return "er";
        case StrategyKind::gem: return "gem";
        case StrategyKind::agem: return "agem";
        case StrategyKind::nsr: return "nsr";
    }
    return "?";
}

StrategyKind strategy_kind_from_string(const std::string& name) {
    for (auto k : {StrategyKind::none, StrategyKind::er, StrategyKind::gem, StrategyKind::agem, StrategyKind::nsr})
        if (to_string(k) == name) return k;
    if (name == "a-gem") return StrategyKind::agem;
    if (name == "nsr+") return StrategyKind::nsr;
    throw std::invalid_argument("unknown strategy '" + name + "' (expected none, er, gem, agem or nsr)");
}

void StrategyConfig::validate() const {
    if (repeat_update == 0) throw std::invalid_argument("repeat_update must be >= 1");
    if (kind == StrategyKind::none) return;
    if (buffer_size == 0) throw std::invalid_argument("buffer_size must be >= 1");
    if (kind == StrategyKind::er && batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
    if ((kind == StrategyKind::gem || kind == StrategyKind::agem) && reference_batch_size == 0)
        throw std::invalid_argument("reference_batch_size must be >= 1");
    if (memory_strength < 0.0) throw std::invalid_argument("memory_strength must be non-negative");
    if (replay_ratio < 0.0) throw std::invalid_argument("replay_ratio must be non-negative");
    if (kind == StrategyKind::nsr && nsr_refresh_period == 0) throw std::invalid_argument("nsr_refresh_period must be >= 1");
}

void OnlineStrategy::observe(const Transition& t, Learner& learner, Rng&) {
    const Batch batch{&t};
    std::vector<double> g;
    for (std::size_t r = 0; r < config_.repeat_update; ++r) {
        learner.loss_gradient(batch, g);
        learner.apply_gradient(g);
        ++stats_.updates;
    }
}

void ExperienceReplay::observe(const Transition& t, Learner& learner, Rng& rng) {
    buffer_.insert(t, rng);
    std::vector<double> g;
    for (std::size_t r = 0; r < config_.repeat_update; ++r) {
        const Batch batch = sample_minibatch(buffer_.items(), config_.batch_size, rng);
        learner.loss_gradient(batch, g);
        learner.apply_gradient(g);
        ++stats_.updates;
    }
}

std::vector<const Transition*> ExperienceReplay::memory() const {
    std::vector<const Transition*> out;
    for (const auto& item : buffer_.items()) out.push_back(&item);
    return out;
}

void EpisodicMemory::begin_subtask(int subtask, Rng& rng) {
    subtask_ = subtask;
    buffer_.begin_subtask(subtask, rng);
}

void EpisodicMemory::observe(const Transition& t, Learner& learner, Rng& rng) {
    gem_store(buffer_, t, subtask_, rng);
    const Batch current{&t};
    std::vector<double> g;
    for (std::size_t r = 0; r < config_.repeat_update; ++r) {
        learner.loss_gradient(current, g);
        if (config_.kind == StrategyKind::agem) {
            const auto pool = buffer_.all();
            Batch ref;
            for (auto i : sample_indices(pool.size(), config_.reference_batch_size, rng)) ref.push_back(pool[i]);
            std::vector<double> g_ref;
            learner.loss_gradient(ref, g_ref);
            auto projected = agem_project(g, g_ref);
            if (projected != g) ++stats_.projections;
            g = std::move(projected);
        } else {
            std::vector<std::vector<double>> task_grads;
            for (const auto& [id, part] : buffer_.partitions()) {
                if (part.empty()) continue;
                const Batch ref = sample_minibatch(part.items(), config_.reference_batch_size, rng);
                learner.loss_gradient(ref, task_grads.emplace_back());
            }
            const GemResult res = gem_project(g, task_grads, config_.memory_strength);
            stats_.projections += res.projected ? 1 : 0;
            stats_.fallbacks += res.fallback ? 1 : 0;
            g = res.gradient;
        }
        learner.apply_gradient(g);
        ++stats_.updates;
    }
}

void WorstSampleRehearsal::observe(const Transition& t, Learner& learner, Rng& rng) {
    if (!buffer_.empty() && steps_ % config_.nsr_refresh_period == 0) {
        buffer_.refresh(learner.sample_losses(buffer_.items()));
        ++stats_.refreshes;
    }
    ++steps_;
    const Batch current{&t};
    const double current_loss = learner.sample_losses(current).front();

    std::vector<double> g;
    for (std::size_t r = 0; r < config_.repeat_update; ++r) {
        const Batch batch = nsr_compose_batch(buffer_, current, config_.replay_ratio, rng);
        learner.loss_gradient(batch, g);
        learner.apply_gradient(g);
        ++stats_.updates;
    }
    std::vector<std::pair<Transition, double>> incoming;
    incoming.emplace_back(t, current_loss);
    nsr_update(buffer_, std::move(incoming));
}

std::unique_ptr<Strategy> make_strategy(const StrategyConfig& config) {
    config.validate();
    switch (config.kind) {
        case StrategyKind::none: return std::make_unique<OnlineStrategy>(config);
        case StrategyKind::er: return std::make_unique<ExperienceReplay>(config);
        case StrategyKind::gem:
        case StrategyKind::agem: return std::make_unique<EpisodicMemory>(config);
        case StrategyKind::nsr: return std::make_unique<WorstSampleRehearsal>(config);
    }
    throw std::invalid_argument("unknown strategy");
}

}  // namespace crl::replay
