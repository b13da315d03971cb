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

#include "crl/harness/experiment.hpp"

#include <fstream>
#include <stdexcept>

#include "crl/harness/snapshot.hpp"
#include "crl/replay/dump.hpp"

namespace crl::harness {

namespace fs = std::filesystem;
using nlohmann::json;

sim::Track resolve_track(const std::string& name_or_path) {
    if (name_or_path == "straight" || name_or_path == "zero" || name_or_path == "slalom")
        return sim::Track::build(name_or_path);
    if (fs::exists(name_or_path)) return sim::Track::load(name_or_path);
    throw std::invalid_argument("unknown track '" + name_or_path + "' (not a built-in name or an existing file)");
}

sim::Environment make_environment(const std::string& track, double reset_noise) {
    return sim::Environment(resolve_track(track), sim::RobotSpec{}, sim::ResetDistribution{0.0, reset_noise});
}

namespace {

sim::TrajectoryRow trajectory_row(std::size_t step, const sim::Pose& pose, std::size_t action,
                                  const sim::StepOutcome& out) {
    return {step, pose, sim::action(action).index, out.deviation, out.reward, out.terminal};
}

}  // namespace

PhaseResult train_subtask(sim::Environment& env, Agent& agent, const SubTask& subtask,
                          agents::EpsilonSchedule& epsilon, RunStreams& streams, bool record_trajectory) {
    PhaseResult result;
    if (subtask.train_steps == 0) return result;

    auto observer = agent.make_observer();
    agents::State state = observer->reset(env.reset(streams.env));
    double sigma = 0.0;
    std::size_t length = 0;
    for (std::size_t i = 0; i < subtask.train_steps; ++i) {
        const auto q = agent.q_values(state);
        const std::size_t a = agents::select_action(q, epsilon.value(), streams.explore);
        const sim::StepOutcome out = env.step(a);
        agents::State next = observer->step(out);

        replay::Transition t{state, a, out.reward, next, out.terminal, subtask.id};
        agent.learn(t, streams.learn);
        agent.end_step(subtask.start_iteration + i + 1);
        epsilon.tick();

        if (record_trajectory) result.trajectory.push_back(trajectory_row(i, env.pose(), a, out));
        sigma += out.reward;
        ++length;
        if (out.terminal || out.exhausted) {
            result.episodes.push_back({subtask.id, Phase::train, result.episodes.size(), sigma, length});
            sigma = 0.0;
            length = 0;
            state = observer->reset(env.reset(streams.env));
        } else {
            state = std::move(next);
        }
    }
    if (length > 0) result.episodes.push_back({subtask.id, Phase::train, result.episodes.size(), sigma, length});
    return result;
}

PhaseResult evaluate_policy(sim::Environment& env, const Policy& policy, int subtask_id, std::size_t steps,
                            Rng env_rng) {
    PhaseResult result;
    if (steps == 0) return result;

    auto observer = policy.make_observer();
    agents::State state = observer->reset(env.reset(env_rng));
    double sigma = 0.0;
    std::size_t length = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        const std::size_t a = agents::argmax(policy.q_values(state));
        const sim::StepOutcome out = env.step(a);
        result.trajectory.push_back(trajectory_row(i, env.pose(), a, out));
        sigma += out.reward;
        ++length;
        if (out.terminal || out.exhausted) {
            result.episodes.push_back({subtask_id, Phase::eval, result.episodes.size(), sigma, length});
            sigma = 0.0;
            length = 0;
            state = observer->reset(env.reset(env_rng));
        } else {
            state = observer->step(out);
        }
    }
    if (length > 0) result.episodes.push_back({subtask_id, Phase::eval, result.episodes.size(), sigma, length});
    return result;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_trace(const fs::path& path, const std::vector<sim::TrajectoryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    sim::write_trajectory_csv(out, rows);
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

RunResult run_experiment(const RunConfig& config, std::uint64_t seed, const std::optional<fs::path>& out_dir,
                         const RunOptions& options) {
    config.validate();
    RunResult result;
    result.config_hash = config.hash();
    result.seed = seed;
    result.scores.label = config.method_label();

    const auto schedule = subtasks(config.schedule);
    // Resolve every track up front so a bad name fails before any training.
    std::vector<sim::Track> tracks;
    for (const auto& st : schedule) tracks.push_back(resolve_track(st.track));

    if (out_dir) {
        fs::create_directories(*out_dir / "snapshots");
        fs::create_directories(*out_dir / "traces");
        if (options.dump_buffers) fs::create_directories(*out_dir / "buffers");
        json cfg = config.to_json();
        cfg["seed"] = seed;
        cfg["config_hash"] = result.config_hash;
        write_text(*out_dir / "config.json", cfg.dump(2) + "\n");
    }

    Rng master(seed);
    Rng agent_rng = master.fork(1);
    RunStreams streams{master.fork(2), master.fork(3), master.fork(4)};
    auto agent = make_agent(config, agent_rng);
    agents::EpsilonSchedule epsilon(config.epsilon_stop, config.epsilon_step);
    sim::Environment env(tracks.front(), sim::RobotSpec{}, sim::ResetDistribution{0.0, config.reset_noise});

    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const SubTask& st = schedule[k];
        const Rng eval_rng = master.fork(100 + static_cast<std::uint64_t>(st.id));
        env.set_track(tracks[k]);
        epsilon.reset(st.id);
        agent->begin_subtask(st.id, streams.learn);

        PhaseResult train = train_subtask(env, *agent, st, epsilon, streams, options.train_traces);
        const auto frozen = agent->freeze();
        result.snapshot_fingerprints.push_back(frozen->fingerprint());

        sim::Environment eval_env(tracks[k], sim::RobotSpec{}, sim::ResetDistribution{0.0, config.reset_noise});
        PhaseResult eval = evaluate_policy(eval_env, *frozen, st.id, st.eval_steps, eval_rng);

        SubTaskScore row{st.id, st.track, 0.0, 0.0};
        if (!train.episodes.empty()) row.history = score(train.episodes, st.id, Phase::train);
        if (!eval.episodes.empty()) row.last_policy = score(eval.episodes, st.id, Phase::eval);
        result.scores.subtasks.push_back(row);

        if (out_dir) {
            const std::string stem = "subtask_" + std::to_string(st.id);
            SnapshotHeader header;
            header.config_hash = result.config_hash;
            header.subtask_id = st.id;
            header.step = st.start_iteration + st.train_steps;
            header.reset_noise = config.reset_noise;
            save_snapshot(*out_dir / "snapshots" / stem, header, *frozen);
            write_trace(*out_dir / "traces" / ("eval_" + stem + ".csv"), eval.trajectory);
            if (options.train_traces) write_trace(*out_dir / "traces" / ("train_" + stem + ".csv"), train.trajectory);
            if (options.dump_buffers && agent->strategy())
                replay::write_buffer_dump(*out_dir / "buffers" / (stem + ".jsonl"),
                                          *out_dir / "buffers" / (stem + ".bin"), agent->strategy()->memory());
        }

        result.episodes.insert(result.episodes.end(), train.episodes.begin(), train.episodes.end());
        result.episodes.insert(result.episodes.end(), eval.episodes.begin(), eval.episodes.end());
        result.eval_traces.push_back(std::move(eval.trajectory));
    }

    if (out_dir) {
        std::ofstream csv(*out_dir / "episodes.csv", std::ios::binary);
        write_episodes_csv(csv, result.episodes);
        if (!csv) throw std::runtime_error("cannot write episodes.csv");
        json scores = result.scores.to_json();
        scores["config_hash"] = result.config_hash;
        scores["seed"] = seed;
        write_text(*out_dir / "scores.json", scores.dump(2) + "\n");
    }
    return result;
}

}  // namespace crl::harness
