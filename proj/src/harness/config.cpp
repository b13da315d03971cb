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

#include "crl/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace crl::harness {

using nlohmann::json;

std::string to_string(AgentKind k) { return k == AgentKind::qtable ? "qtable" : "dqn"; }

AgentKind agent_kind_from_string(const std::string& name) {
    if (name == "qtable" || name == "q-table") return AgentKind::qtable;
    if (name == "dqn") return AgentKind::dqn;
    throw std::invalid_argument("unknown agent '" + name + "' (expected qtable or dqn)");
}

std::vector<SubTask> subtasks(const Schedule& schedule) {
    std::vector<SubTask> out;
    std::size_t start = 0;
    int id = 1;
    for (const auto& track : schedule.tracks) {
        out.push_back({id++, track, start, schedule.train_steps, schedule.eval_steps});
        start += schedule.train_steps;
    }
    return out;
}

void RunConfig::validate() const {
    if (agent == AgentKind::qtable) {
        if (algorithm != "original" && algorithm != "speedy")
            throw std::invalid_argument("qtable algorithm must be original or speedy, got '" + algorithm + "'");
        if (strategy.kind != replay::StrategyKind::none)
            throw std::invalid_argument("replay strategies apply to the dqn agent only");
        if (state_bins == 0) throw std::invalid_argument("state_bins must be >= 1");
        if (qtable_init_scale < 0.0) throw std::invalid_argument("init_scale must be non-negative");
    } else {
        if (algorithm != "original" && algorithm != "double")
            throw std::invalid_argument("dqn algorithm must be original or double, got '" + algorithm + "'");
        if (frame_stack == 0) throw std::invalid_argument("frame_stack must be >= 1");
        if (target_sync_period == 0) throw std::invalid_argument("target_sync_period must be >= 1");
        if (!(huber_delta > 0.0)) throw std::invalid_argument("huber_delta must be positive");
    }
    if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be non-negative");
    if (!(discount_factor >= 0.0 && discount_factor < 1.0))
        throw std::invalid_argument("discount_factor must lie in [0, 1)");
    if (!(epsilon_stop >= 0.0 && epsilon_stop <= 1.0)) throw std::invalid_argument("epsilon.stop must lie in [0, 1]");
    if (!(epsilon_step >= 0.0 && epsilon_step <= 1.0)) throw std::invalid_argument("epsilon.step must lie in [0, 1]");
    if (schedule.tracks.empty()) throw std::invalid_argument("schedule.tracks must not be empty");
    if (!(reset_noise >= 0.0)) throw std::invalid_argument("reset_noise must be non-negative");
    strategy.validate();
}

std::string RunConfig::method_label() const {
    if (!label.empty()) return label;
    if (agent == AgentKind::qtable) return algorithm == "speedy" ? "speedy-qtable" : "qtable";
    std::string base = algorithm == "double" ? "ddqn" : "dqn";
    switch (strategy.kind) {
        case replay::StrategyKind::none: return base;
        case replay::StrategyKind::er: return base + "+er";
        case replay::StrategyKind::gem: return "gem";
        case replay::StrategyKind::agem: return "agem";
        case replay::StrategyKind::nsr: return "nsr+";
    }
    return base;
}

json RunConfig::to_json() const {
    json j;
    j["agent"] = to_string(agent);
    j["algorithm"] = algorithm;
    j["learning_rate"] = learning_rate;
    j["discount_factor"] = discount_factor;
    j["strategy"] = replay::to_string(strategy.kind);
    j["buffer_size"] = strategy.buffer_size;
    j["batch_size"] = strategy.batch_size;
    j["reference_batch_size"] = strategy.reference_batch_size;
    j["memory_strength"] = strategy.memory_strength;
    j["replay_ratio"] = strategy.replay_ratio;
    j["nsr_refresh_period"] = strategy.nsr_refresh_period;
    j["repeat_update"] = strategy.repeat_update;
    j["epsilon"] = {{"stop", epsilon_stop}, {"step", epsilon_step}};
    j["schedule"] = {{"tracks", schedule.tracks},
                     {"train_steps", schedule.train_steps},
                     {"eval_steps", schedule.eval_steps}};
    j["state_bins"] = state_bins;
    j["init_scale"] = qtable_init_scale;
    j["frame_stack"] = frame_stack;
    j["target_sync_period"] = target_sync_period;
    j["huber_delta"] = huber_delta;
    j["reset_noise"] = reset_noise;
    j["label"] = method_label();
    return j;
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

const char* const kKnownKeys[] = {
    "agent", "algorithm", "learning_rate", "discount_factor", "strategy", "buffer_size", "batch_size",
    "reference_batch_size", "memory_strength", "replay_ratio", "nsr_refresh_period", "repeat_update", "epsilon",
    "schedule", "state_bins", "init_scale", "frame_stack", "target_sync_period", "huber_delta", "reset_noise",
    "label", "seed", "config_hash"};

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : kKnownKeys) known = known || key == k;
        if (!known) throw std::invalid_argument("unknown config key '" + key + "'");
    }

    RunConfig c;
    if (j.contains("agent")) c.agent = agent_kind_from_string(j.at("agent").get<std::string>());
    if (j.contains("strategy"))
        c.strategy.kind = replay::strategy_kind_from_string(j.at("strategy").get<std::string>());

    const bool cl = c.strategy.kind == replay::StrategyKind::gem || c.strategy.kind == replay::StrategyKind::agem ||
                    c.strategy.kind == replay::StrategyKind::nsr;
    c.learning_rate = c.agent == AgentKind::qtable ? 0.5 : 1e-2;
    c.strategy.buffer_size = cl ? 1000 : 10000;
    c.strategy.repeat_update = cl ? 3 : 1;

    take(j, "algorithm", c.algorithm);
    take(j, "learning_rate", c.learning_rate);
    take(j, "discount_factor", c.discount_factor);
    take(j, "buffer_size", c.strategy.buffer_size);
    take(j, "batch_size", c.strategy.batch_size);
    take(j, "reference_batch_size", c.strategy.reference_batch_size);
    take(j, "memory_strength", c.strategy.memory_strength);
    take(j, "replay_ratio", c.strategy.replay_ratio);
    take(j, "nsr_refresh_period", c.strategy.nsr_refresh_period);
    take(j, "repeat_update", c.strategy.repeat_update);
    if (j.contains("epsilon")) {
        const json& e = j.at("epsilon");
        take(e, "stop", c.epsilon_stop);
        take(e, "step", c.epsilon_step);
    }
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        take(s, "tracks", c.schedule.tracks);
        take(s, "train_steps", c.schedule.train_steps);
        take(s, "eval_steps", c.schedule.eval_steps);
    }
    take(j, "state_bins", c.state_bins);
    take(j, "init_scale", c.qtable_init_scale);
    take(j, "frame_stack", c.frame_stack);
    take(j, "target_sync_period", c.target_sync_period);
    take(j, "huber_delta", c.huber_delta);
    take(j, "reset_noise", c.reset_noise);
    take(j, "label", c.label);
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunConfig::hash() const {
    json j = to_json();
    j.erase("label");
    return fnv1a_hex(j.dump());
}

}  // namespace crl::harness
