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

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crl/harness/analysis.hpp"
#include "crl/harness/config.hpp"
#include "crl/harness/experiment.hpp"
#include "crl/harness/snapshot.hpp"
#include "json.hpp"

namespace {

using namespace crl;
using nlohmann::json;

int run_train(const std::string& config_path, std::uint64_t seed, const std::string& out, bool dump_buffers,
              bool train_traces) {
    const harness::RunConfig config = harness::RunConfig::load(config_path);
    harness::RunOptions options;
    options.dump_buffers = dump_buffers;
    options.train_traces = train_traces;
    const harness::RunResult result = harness::run_experiment(config, seed, std::filesystem::path(out), options);
    std::cout << result.scores.label << " seed " << seed << " (config " << result.config_hash << ")\n";
    for (const auto& st : result.scores.subtasks)
        std::cout << "  sub-task " << st.id << " [" << st.track << "] history " << st.history << ", last policy "
                  << st.last_policy << '\n';
    std::cout << "  overall history " << result.scores.overall_history() << ", last policy "
              << result.scores.overall_last_policy() << '\n';
    return 0;
}

int run_eval(const std::string& snapshot_path, const std::string& track, std::size_t steps, std::uint64_t seed,
             const std::string& trace_path) {
    const harness::Snapshot snap = harness::load_snapshot(snapshot_path);
    sim::Environment env = harness::make_environment(track, snap.header.reset_noise);
    const harness::PhaseResult res = harness::evaluate_policy(env, *snap.policy, snap.header.subtask_id, steps, Rng(seed));

    double total = 0.0, abs_dev = 0.0;
    std::size_t seen = 0;
    for (const auto& e : res.episodes) total += e.sigma;
    for (const auto& d : harness::deviation_trace(res.trajectory))
        if (d) {
            abs_dev += std::abs(*d);
            ++seen;
        }
    json j;
    j["snapshot"] = snapshot_path;
    j["track"] = track;
    j["steps"] = steps;
    j["episodes"] = res.episodes.size();
    j["score"] = total;
    j["mean_abs_deviation"] = seen ? abs_dev / static_cast<double>(seen) : 1.0;
    std::cout << j.dump(2) << '\n';

    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        sim::write_trajectory_csv(out, res.trajectory);
        if (!out) throw std::runtime_error("cannot write " + trace_path);
    }
    return 0;
}

int run_compare(const std::vector<std::string>& dirs, const std::string& format) {
    const auto fmt = harness::table_format_from_string(format);
    std::vector<harness::RunRecord> runs;
    for (const auto& d : dirs) runs.push_back(harness::load_run(d));
    harness::write_comparison(std::cout, harness::compare_runs(runs), fmt);
    return 0;
}

int run_analyze(const std::string& dir, const std::string& emit, double smoothing) {
    const harness::RunRecord run = harness::load_run(dir);
    if (emit == "action-frequency")
        harness::write_action_frequency(std::cout, run);
    else if (emit == "deviation-trace")
        harness::write_deviation_trace(std::cout, run);
    else
        harness::write_score_curve(std::cout, run, smoothing);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continual reinforcement learning benchmark for a simulated line-following robot"};
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "Run the sub-task schedule for one config and seed");
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool dump_buffers = false, train_traces = false;
    train->add_option("--config", config_path, "Run config JSON")->required()->check(CLI::ExistingFile);
    train->add_option("--seed", seed, "Random seed")->default_val(0);
    train->add_option("--out", out_dir, "Output directory")->required();
    train->add_flag("--dump-buffers", dump_buffers, "Write the replay memory after each sub-task");
    train->add_flag("--train-traces", train_traces, "Also write training trajectories");

    auto* eval = app.add_subcommand("eval", "Greedy rollout of a stored policy");
    std::string snapshot_path, track, trace_path;
    std::size_t steps = 5000;
    std::uint64_t eval_seed = 0;
    eval->add_option("--snapshot", snapshot_path, "Snapshot header (.json)")->required()->check(CLI::ExistingFile);
    eval->add_option("--track", track, "straight, zero, slalom or a track JSON file")->required();
    eval->add_option("--steps", steps, "Environment steps")->default_val(5000);
    eval->add_option("--seed", eval_seed, "Seed for reset poses")->default_val(0);
    eval->add_option("--trace", trace_path, "Write the trajectory CSV here");

    auto* compare = app.add_subcommand("compare", "Score table over runs, averaged per method");
    std::vector<std::string> run_dirs;
    std::string format = "markdown";
    compare->add_option("--runs", run_dirs, "Run directories")->required()->expected(1, -1);
    compare->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "markdown"}))
        ->default_val("markdown");

    auto* analyze = app.add_subcommand("analyze", "CSV exports of one run for plotting");
    std::string run_dir, emit;
    double smoothing = 0.05;
    analyze->add_option("--run", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
    analyze->add_option("--emit", emit, "What to export")
        ->required()
        ->check(CLI::IsMember({"action-frequency", "deviation-trace", "score-curve"}));
    analyze->add_option("--smoothing", smoothing, "Exponential smoothing factor for score-curve")
        ->default_val(0.05)
        ->check(CLI::Range(1e-9, 1.0));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return run_train(config_path, seed, out_dir, dump_buffers, train_traces);
        if (*eval) return run_eval(snapshot_path, track, steps, eval_seed, trace_path);
        if (*compare) return run_compare(run_dirs, format);
        if (*analyze) return run_analyze(run_dir, emit, smoothing);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
