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
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crl/replay/strategies.hpp"
#include "json.hpp"

namespace crl::harness {

enum class AgentKind { qtable, dqn };

std::string to_string(AgentKind k);
AgentKind agent_kind_from_string(const std::string& name);

struct Schedule {
    std::vector<std::string> tracks{"straight", "zero", "slalom"};  // names or track JSON paths
    std::size_t train_steps = 50000;
    std::size_t eval_steps = 5000;
};

struct SubTask {
    int id = 1;
    std::string track;
    std::size_t start_iteration = 0;
    std::size_t train_steps = 0;
    std::size_t eval_steps = 0;
};

std::vector<SubTask> subtasks(const Schedule& schedule);

// Everything that determines a run except the seed. Unset JSON keys take
// agent/strategy dependent defaults (learning rate 0.5 for Q-tables and
// 1e-2 for DQNs, buffer 10,000 for ER and 1,000 for the CL methods, three
// repeated updates for the CL methods).
struct RunConfig {
    AgentKind agent = AgentKind::qtable;
    std::string algorithm = "original";  // original | speedy (qtable); original | double (dqn)
    double learning_rate = 0.5;
    double discount_factor = 0.75;
    replay::StrategyConfig strategy;
    double epsilon_stop = 0.005;
    double epsilon_step = 0.001;
    Schedule schedule;

    std::size_t state_bins = 33;
    double qtable_init_scale = 1e-3;
    std::size_t frame_stack = 3;
    std::size_t target_sync_period = 500;
    double huber_delta = 1.0;
    double reset_noise = 0.005;  // meters
    std::string label;           // grouping key for compare; derived when empty

    void validate() const;
    std::string method_label() const;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::filesystem::path& path);

    // 16 hex digits, FNV-1a over the canonical JSON form without the label.
    std::string hash() const;
};

std::string fnv1a_hex(const std::string& text);

}  // namespace crl::harness
