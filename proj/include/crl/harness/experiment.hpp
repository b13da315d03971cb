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
#include <optional>
#include <string>
#include <vector>

#include "crl/agents/exploration.hpp"
#include "crl/harness/config.hpp"
#include "crl/harness/metrics.hpp"
#include "crl/harness/policy.hpp"
#include "crl/sim/environment.hpp"
#include "crl/sim/track.hpp"

namespace crl::harness {

// A built-in track name (straight, zero, slalom) or a path to a track JSON file.
sim::Track resolve_track(const std::string& name_or_path);

sim::Environment make_environment(const std::string& track, double reset_noise);

// Independent random streams of one run.
struct RunStreams {
    Rng env;      // reset poses
    Rng explore;  // epsilon-greedy draws
    Rng learn;    // replay sampling and buffer decisions
};

struct PhaseResult {
    std::vector<EpisodeRecord> episodes;
    std::vector<sim::TrajectoryRow> trajectory;  // filled when requested
};

// Runs exactly subtask.train_steps environment steps with online updates.
// The caller resets `epsilon` for the sub-task first. Episodes end on a lost
// line or at the end of an open track; a trailing partial episode is
// recorded too, so lengths always add up to train_steps.
PhaseResult train_subtask(sim::Environment& env, Agent& agent, const SubTask& subtask,
                          agents::EpsilonSchedule& epsilon, RunStreams& streams, bool record_trajectory = false);

// Greedy rollout of a fixed policy for exactly `steps` steps; nothing is
// learned and `policy` is not modified.
PhaseResult evaluate_policy(sim::Environment& env, const Policy& policy, int subtask_id, std::size_t steps,
                            Rng env_rng);

struct RunOptions {
    bool dump_buffers = false;     // write the replay memory after each sub-task
    bool train_traces = false;     // also write training trajectories
};

struct RunResult {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<EpisodeRecord> episodes;
    ScoreTable scores;
    std::vector<std::vector<sim::TrajectoryRow>> eval_traces;  // one per sub-task
    std::vector<std::string> snapshot_fingerprints;            // one per sub-task
};

// For each sub-task in order: epsilon reset, training, snapshot, evaluation
// on the same track. When `out_dir` is given, writes config.json,
// episodes.csv, scores.json, snapshots/ and traces/ there.
RunResult run_experiment(const RunConfig& config, std::uint64_t seed,
                         const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                         const RunOptions& options = {});

}  // namespace crl::harness
