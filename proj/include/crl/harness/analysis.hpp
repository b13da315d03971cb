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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "crl/harness/metrics.hpp"
#include "crl/sim/environment.hpp"

namespace crl::harness {

struct RunRecord {
    std::filesystem::path dir;
    ScoreTable scores;
    std::vector<EpisodeRecord> episodes;
    std::vector<std::vector<sim::TrajectoryRow>> eval_traces;  // by sub-task order
};

RunRecord load_run(const std::filesystem::path& dir);

// Groups runs by label (in order of first appearance) and averages each group.
std::vector<ScoreTable> compare_runs(const std::vector<RunRecord>& runs);

enum class TableFormat { csv, json, markdown };
TableFormat table_format_from_string(const std::string& name);

// One row per method: history and last-policy score per sub-task, then the
// overall sums.
void write_comparison(std::ostream& out, const std::vector<ScoreTable>& tables, TableFormat format);

// CSV exports for plotting.
//   action-frequency: subtask,action_index,category,count
//   deviation-trace:  subtask,step,deviation   (empty where the line was lost)
//   score-curve:      subtask,episode,sigma_e,smoothed   (training episodes)
void write_action_frequency(std::ostream& out, const RunRecord& run);
void write_deviation_trace(std::ostream& out, const RunRecord& run);
void write_score_curve(std::ostream& out, const RunRecord& run, double smoothing);

}  // namespace crl::harness
