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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crl/sim/environment.hpp"
#include "crl/sim/robot.hpp"
#include "json.hpp"

namespace crl::harness {

enum class Phase { train, eval };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& name);

struct EpisodeRecord {
    int subtask = 1;
    Phase phase = Phase::train;
    std::size_t episode = 0;
    double sigma = 0.0;  // sum of rewards
    std::size_t length = 0;

    friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

// Columns: subtask,phase,episode,sigma_e,length
void write_episodes_csv(std::ostream& out, const std::vector<EpisodeRecord>& records);
std::vector<EpisodeRecord> read_episodes_csv(std::istream& in);

// Sum of sigma over the records of (subtask, phase). Throws
// std::invalid_argument when there are none.
double score(const std::vector<EpisodeRecord>& records, int subtask, Phase phase);

struct SubTaskScore {
    int id = 1;
    std::string track;
    double history = 0.0;
    double last_policy = 0.0;
};

struct ScoreTable {
    std::string label;
    std::size_t runs = 1;  // seeds averaged into this table
    std::vector<SubTaskScore> subtasks;

    double overall_history() const;
    double overall_last_policy() const;

    nlohmann::json to_json() const;
    static ScoreTable from_json(const nlohmann::json& j);
};

// Element-wise mean over runs with identical sub-task layout.
ScoreTable aggregate(const std::vector<ScoreTable>& runs);

// y_0 = x_0, y_i = factor x_i + (1 - factor) y_{i-1}.
std::vector<double> smooth(const std::vector<double>& series, double factor);

struct ActionFrequency {
    std::array<std::size_t, sim::kActionCount> counts{};  // indexed by zero-based action id
    std::size_t total() const;
};

ActionFrequency action_frequency(const std::vector<sim::TrajectoryRow>& trajectory);

// Normalized deviation per step; empty where the line was lost.
std::vector<std::optional<double>> deviation_trace(const std::vector<sim::TrajectoryRow>& trajectory);

}  // namespace crl::harness
