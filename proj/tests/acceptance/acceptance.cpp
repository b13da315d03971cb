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

// Acceptance checks, one PASS/FAIL line per criterion. With no arguments all
// criteria run; otherwise only the listed numbers (e.g. `acceptance 1 4 9`).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "crl/harness/analysis.hpp"
#include "crl/harness/config.hpp"
#include "crl/harness/experiment.hpp"
#include "crl/numerics/network.hpp"
#include "crl/replay/buffers.hpp"
#include "crl/replay/projection.hpp"
#include "crl/sim/camera.hpp"
#include "support/chain.hpp"
#include "support/gem_oracle.hpp"
#include "support/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace crl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome gradients() {
    const auto t0 = Clock::now();
    Rng rng(2024);
    struct Kind {
        const char* name;
        std::function<testing::GradCheck(Rng&)> check;
    };
    const std::vector<Kind> kinds{{"conv", testing::check_conv},   {"maxpool", testing::check_maxpool},
                                  {"relu", testing::check_relu},   {"dense", testing::check_dense},
                                  {"huber", testing::check_huber}, {"network", testing::check_network}};
    bool ok = true;
    std::string detail;
    for (const auto& k : kinds) {
        testing::GradCheck total;
        const int instances = std::string(k.name) == "network" ? 20 : 100;
        for (int i = 0; i < instances; ++i) total.merge(k.check(rng));
        ok = ok && total.max_rel <= 1e-4 && total.skipped * 100 <= total.checked;
        detail += std::string(k.name) + " " + std::to_string(instances) + "x max rel " + fmt("%.2e", total.max_rel);
        if (total.skipped) detail += " (" + std::to_string(total.skipped) + " kink-straddling coords skipped)";
        detail += "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 30.0;
    return {ok, detail + fmt("%.1f s", secs)};
}

Outcome tabular_oracle() {
    const auto t0 = Clock::now();
    const double orig = testing::chain_q_learning(false, 0.5, 0.75, 10000, 1e-7);
    const double speedy = testing::chain_q_learning(true, 0.5, 0.75, 10000, 1e-7);
    const double secs = seconds_since(t0);
    return {orig <= 1e-6 && speedy <= 1e-6 && secs < 1.0,
            "original err " + fmt("%.1e", orig) + ", speedy err " + fmt("%.1e", speedy) + ", " + fmt("%.3f s", secs)};
}

Outcome reward_conformance() {
    const auto t0 = Clock::now();
    int mismatches = 0;
    for (int d = 0; d <= 100; ++d) {
        const double expected = 0.5 - std::abs((d - 50.0) / 50.0);
        for (sim::ActionId a = 1; a < sim::kActionCount; ++a)
            if (sim::compute_reward(d, sim::action(a)) != expected) ++mismatches;
        if (sim::compute_reward(d, sim::action(sim::kNeutralAction)) != -1.0) ++mismatches;
    }
    for (sim::ActionId a = 0; a < sim::kActionCount; ++a)
        if (sim::compute_reward(std::nullopt, sim::action(a)) != -1.0) ++mismatches;
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 1.0,
            std::to_string(mismatches) + " mismatches over 101 deviations x 9 actions + terminal, " +
                fmt("%.3f s", secs)};
}

Outcome projections() {
    const auto t0 = Clock::now();
    Rng rng(77);
    double agem_min = 0.0, gem_min = 0.0, oracle_err = 0.0, equiv_err = 0.0;
    int passthrough_bad = 0, fallbacks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = testing::pick(rng, 2, 20);
        const auto g = testing::random_values(dim, rng);
        const auto ref = testing::random_values(dim, rng);

        const auto a = replay::agem_project(g, ref);
        const double d = testing::dot_vec(g, ref);
        if (d >= 0.0 && a != g) ++passthrough_bad;
        agem_min = std::min(agem_min, testing::dot_vec(a, ref));

        const std::size_t k = testing::pick(rng, 1, 3);
        testing::Matrix grads;
        for (std::size_t i = 0; i < k; ++i) grads.push_back(testing::random_values(dim, rng));
        const double strength = trial % 2 ? 0.5 : 0.0;
        const auto r = replay::gem_project(g, grads, strength);
        fallbacks += r.fallback;
        for (const auto& gk : grads) gem_min = std::min(gem_min, testing::dot_vec(r.gradient, gk));
        const auto oracle = testing::gem_oracle(g, grads, strength);
        for (std::size_t i = 0; i < dim; ++i)
            oracle_err = std::max(oracle_err, std::abs(r.gradient[i] - oracle[i]) / std::max(1.0, std::abs(oracle[i])));

        const auto single = replay::gem_project(g, {ref}, 0.0).gradient;
        for (std::size_t i = 0; i < dim; ++i) equiv_err = std::max(equiv_err, std::abs(single[i] - a[i]));
    }
    const double secs = seconds_since(t0);
    const bool ok = agem_min >= -1e-9 && passthrough_bad == 0 && gem_min >= -1e-6 && oracle_err <= 1e-4 &&
                    equiv_err <= 1e-6 && secs < 30.0;
    return {ok, "a-gem min dot " + fmt("%.1e", agem_min) + ", pass-through violations " +
                    std::to_string(passthrough_bad) + ", gem min dot " + fmt("%.1e", gem_min) + ", oracle err " +
                    fmt("%.1e", oracle_err) + ", k=1 vs a-gem " + fmt("%.1e", equiv_err) + ", fallbacks " +
                    std::to_string(fallbacks) + ", " + fmt("%.2f s", secs)};
}

// Upper tail of the chi-square distribution via the Wilson-Hilferty cube-root
// normal approximation, accurate for thousands of degrees of freedom.
double chi_square_upper_tail(double x, double df) {
    const double z = (std::cbrt(x / df) - (1.0 - 2.0 / (9.0 * df))) / std::sqrt(2.0 / (9.0 * df));
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

Outcome reservoir() {
    const auto t0 = Clock::now();
    const std::size_t m = 100, n = 10000, trials = 2000;
    std::vector<std::size_t> held(n, 0);
    Rng rng(31337);
    for (std::size_t t = 0; t < trials; ++t) {
        replay::ReservoirBuffer<std::uint32_t> buf(m);
        for (std::uint32_t i = 0; i < n; ++i) buf.insert(i, rng);
        for (auto x : buf.items()) ++held[x];
    }
    const double expected = static_cast<double>(trials * m) / static_cast<double>(n);
    double chi2 = 0.0;
    for (auto h : held) chi2 += (h - expected) * (h - expected) / expected;
    const double p = chi_square_upper_tail(chi2, static_cast<double>(n - 1));
    const double secs = seconds_since(t0);
    return {p > 0.001 && secs < 60.0,
            "chi2 " + fmt("%.1f", chi2) + " on " + std::to_string(n - 1) + " df, p " + fmt("%.3f", p) + ", " +
                fmt("%.1f s", secs)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "crl_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::vector<std::pair<std::string, std::string>> configs{
        {"qtable", R"({"agent":"qtable","algorithm":"speedy","schedule":{"train_steps":2000,"eval_steps":500}})"},
        {"gem", R"({"agent":"dqn","strategy":"gem","schedule":{"train_steps":150,"eval_steps":50}})"},
        {"nsr", R"({"agent":"dqn","strategy":"nsr","algorithm":"double","schedule":{"train_steps":150,"eval_steps":50}})"}};
    bool ok = true;
    std::string detail;
    for (const auto& [name, text] : configs) {
        const fs::path cfg = root / (name + ".json");
        std::ofstream(cfg) << text;
        for (const char* run : {"a", "b"}) {
            const std::string cmd = std::string("\"") + CRLBENCH_EXE + "\" train --config \"" + cfg.string() +
                                    "\" --seed 17 --out \"" + (root / (name + run)).string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                detail += name + " run failed; ";
            }
        }
        const bool same = slurp(root / (name + "a") / "scores.json") == slurp(root / (name + "b") / "scores.json") &&
                          slurp(root / (name + "a") / "episodes.csv") == slurp(root / (name + "b") / "episodes.csv") &&
                          !slurp(root / (name + "a") / "scores.json").empty();
        ok = ok && same;
        detail += name + (same ? " identical; " : " DIFFERS; ");
    }
    fs::remove_all(root);
    return {ok, detail + "via the train command"};
}

Outcome architecture() {
    const numerics::Network net = numerics::Network::default_network();
    std::vector<std::size_t> dense;
    for (const auto& b : net.parameters().blocks())
        if (net.layers()[b.layer].kind == numerics::LayerKind::dense) dense.push_back(b.weight.size() + b.bias.size());
    const bool ok = net.input_shape() == numerics::Shape{5, 100, 3} && net.output_shape() == numerics::Shape{9} &&
                    dense == std::vector<std::size_t>{35300, 10100, 909};
    std::string counts;
    for (auto c : dense) counts += std::to_string(c) + " ";
    return {ok, "5x100x3 -> " + std::to_string(net.output_shape()[0]) + " outputs, dense params " + counts +
                    "(total " + std::to_string(net.parameters().total_count()) + ")"};
}

Outcome desk_scale_ordering() {
    const auto t0 = Clock::now();
    const std::vector<std::string> methods{"er", "gem", "agem", "nsr"};
    std::vector<harness::ScoreTable> means;
    for (const auto& m : methods) {
        const auto tm = Clock::now();
        harness::RunConfig cfg = harness::RunConfig::from_json(
            {{"agent", "dqn"}, {"strategy", m}, {"schedule", {{"train_steps", 10000}, {"eval_steps", 2000}}}});
        std::vector<harness::ScoreTable> runs;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) runs.push_back(harness::run_experiment(cfg, seed).scores);
        means.push_back(harness::aggregate(runs));
        std::cout << "  " << cfg.method_label() << ": " << fmt("%.0f s", seconds_since(tm)) << '\n';
    }
    std::cout << "  seed-mean scores (3 seeds, 3 x 10,000 train / 2,000 eval):\n";
    std::ostringstream table;
    harness::write_comparison(table, means, harness::TableFormat::markdown);
    std::istringstream lines(table.str());
    for (std::string line; std::getline(lines, line);) std::cout << "  " << line << '\n';

    const double er = means[0].overall_last_policy();
    bool ordering = true;
    std::string detail = "last-policy overall: dqn+er " + fmt("%.1f", er);
    for (std::size_t i = 1; i < means.size(); ++i) {
        const double v = means[i].overall_last_policy();
        ordering = ordering && v > er;
        detail += ", " + means[i].label + " " + fmt("%.1f", v);
    }
    int worst_two = 0;
    for (const auto& t : means) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < t.subtasks.size(); ++i)
            if (t.subtasks[i].last_policy < t.subtasks[worst].last_policy) worst = i;
        worst_two += t.subtasks[worst].id == 2;
    }
    const bool pattern = 2 * worst_two > static_cast<int>(means.size());
    detail += "; sub-task 2 worst for " + std::to_string(worst_two) + "/" + std::to_string(means.size()) +
              " methods; " + fmt("%.0f s", seconds_since(t0));
    return {ordering && pattern, detail};
}

// Mean |normalized deviation| over an evaluation trajectory; steps without
// the line count as 1, the edge of the image.
double mean_abs_deviation(const std::vector<sim::TrajectoryRow>& traj) {
    double s = 0.0;
    for (const auto& d : harness::deviation_trace(traj)) s += d ? std::abs(*d) : 1.0;
    return s / static_cast<double>(traj.size());
}

Outcome skill_sanity() {
    harness::RunConfig cfg;
    cfg.schedule = {{"straight"}, 20000, 2000};
    const std::uint64_t seed = 5;

    // The untrained policy: same seed, so the same initial table, no training.
    harness::RunConfig untrained_cfg = cfg;
    untrained_cfg.schedule.train_steps = 0;
    const harness::RunResult before = harness::run_experiment(untrained_cfg, seed);
    const harness::RunResult after = harness::run_experiment(cfg, seed);

    const double score = after.scores.overall_last_policy();
    const double dev_before = mean_abs_deviation(before.eval_traces[0]);
    const double dev_after = mean_abs_deviation(after.eval_traces[0]);
    return {score > 0.0 && dev_after < dev_before,
            "last-policy score " + fmt("%.1f", score) + " (untrained " +
                fmt("%.1f", before.scores.overall_last_policy()) + "), mean |deviation| " + fmt("%.3f", dev_after) +
                " vs untrained " + fmt("%.3f", dev_before)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"gradient correctness", gradients},
        {"tabular oracle", tabular_oracle},
        {"reward conformance", reward_conformance},
        {"projection invariants", projections},
        {"reservoir uniformity", reservoir},
        {"determinism", determinism},
        {"architecture conformance", architecture},
        {"desk-scale ordering", desk_scale_ordering},
        {"skill sanity", skill_sanity}};

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << "criterion " << id << " (" << criteria[i].first << "): " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
