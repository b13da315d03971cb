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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crl/replay/buffers.hpp"
#include "crl/replay/dump.hpp"
#include "crl/replay/projection.hpp"
#include "crl/replay/strategies.hpp"
#include "doctest.h"
#include "support/gem_oracle.hpp"
#include "support/gradcheck.hpp"

using namespace crl;
using namespace crl::replay;

namespace {

Transition tagged(int id, int subtask = 1) {
    Transition t;
    t.state.index = static_cast<std::uint32_t>(id);
    t.subtask = subtask;
    return t;
}

}  // namespace

TEST_CASE("reservoir inclusion is exactly uniform over every draw sequence") {
    // Enumerate all draw sequences for M = 2, N = 5: the n-th arrival
    // (n >= M, zero-based) draws uniformly from [0, n].
    const std::size_t m = 2, n = 5;
    std::vector<std::size_t> draws(n, 0);
    std::map<int, std::size_t> held;
    std::size_t sequences = 0;
    while (true) {
        ReservoirBuffer<int> buf(m);
        for (std::size_t i = 0; i < n; ++i) buf.insert_with_draw(static_cast<int>(i), draws[i]);
        for (int x : buf.items()) ++held[x];
        ++sequences;
        std::size_t pos = m;
        while (pos < n && ++draws[pos] > pos) draws[pos++] = 0;
        if (pos == n) break;
    }
    CHECK(sequences == 3 * 4 * 5);
    for (int i = 0; i < static_cast<int>(n); ++i)
        CHECK(static_cast<double>(held[i]) / static_cast<double>(sequences) == doctest::Approx(double(m) / n));
}

TEST_CASE("reservoir fill phase and capacity") {
    Rng rng(1), untouched(1);
    ReservoirBuffer<int> buf(3);
    for (int i = 0; i < 3; ++i) buf.insert(i, rng);
    CHECK(buf.items() == std::vector<int>{0, 1, 2});
    CHECK(rng.next_u64() == untouched.next_u64());
    for (int i = 3; i < 100; ++i) buf.insert(i, rng);
    CHECK(buf.size() == 3);
    CHECK(buf.seen() == 100);
}

TEST_CASE("reservoir downsampling keeps a subset in order") {
    Rng rng(2);
    ReservoirBuffer<int> buf(10);
    for (int i = 0; i < 10; ++i) buf.insert(i, rng);
    buf.downsample(4, rng);
    CHECK(buf.size() == 4);
    CHECK(buf.capacity() == 4);
    CHECK(std::is_sorted(buf.items().begin(), buf.items().end()));
}

TEST_CASE("sampling helpers") {
    Rng rng(3);
    const auto d = sample_distinct(10, 10, rng);
    CHECK(std::set<std::size_t>(d.begin(), d.end()).size() == 10);
    const auto w = sample_indices(3, 50, rng);
    CHECK(w.size() == 50);
    CHECK(*std::max_element(w.begin(), w.end()) < 3);
    std::vector<int> empty;
    CHECK_THROWS_AS(sample_minibatch(empty, 2, rng), std::invalid_argument);
}

TEST_CASE("partitioned buffer splits its capacity across sub-tasks") {
    Rng rng(4);
    PartitionedBuffer buf(12);
    for (int i = 0; i < 50; ++i) gem_store(buf, tagged(i, 1), 1, rng);
    CHECK(buf.size() == 12);
    for (int i = 0; i < 50; ++i) gem_store(buf, tagged(i, 2), 2, rng);
    CHECK(buf.partitions().at(1).size() == 6);
    CHECK(buf.partitions().at(2).size() == 6);
    for (int i = 0; i < 50; ++i) gem_store(buf, tagged(i, 3), 3, rng);
    CHECK(buf.size() == 12);
    for (const auto& [id, part] : buf.partitions()) {
        CHECK(part.size() == 4);
        for (const auto& t : part.items()) CHECK(t.subtask == id);
    }
}

TEST_CASE("worst buffer keeps the highest losses, earlier items winning ties") {
    WorstBuffer buf(3);
    nsr_update(buf, {{tagged(0), 0.5}, {tagged(1), 2.0}, {tagged(2), 0.5}});
    nsr_update(buf, {{tagged(3), 1.0}, {tagged(4), 0.5}});
    std::vector<std::uint32_t> ids;
    for (const auto* t : buf.items()) ids.push_back(t->state.index);
    CHECK(ids == std::vector<std::uint32_t>{1, 3, 0});

    buf.refresh({0.0, 0.0, 9.0});
    nsr_update(buf, {{tagged(5), 1.0}});
    ids.clear();
    for (const auto* t : buf.items()) ids.push_back(t->state.index);
    CHECK(ids == std::vector<std::uint32_t>{0, 5, 1});
}

TEST_CASE("nsr batches hold the current item plus ceil(r |current|) distinct buffer items") {
    Rng rng(5);
    WorstBuffer buf(10);
    for (int i = 0; i < 10; ++i) nsr_update(buf, {{tagged(i), double(i)}});
    const Transition cur = tagged(99);
    const auto batch = nsr_compose_batch(buf, {&cur}, 2.5, rng);
    REQUIRE(batch.size() == 1 + 3);
    CHECK(batch[0] == &cur);
    CHECK(std::set<const Transition*>(batch.begin() + 1, batch.end()).size() == 3);
    CHECK(nsr_compose_batch(buf, {&cur}, 0.0, rng).size() == 1);
    CHECK(nsr_compose_batch(WorstBuffer(4), {&cur}, 1.0, rng).size() == 1);
}

TEST_CASE("a-gem projection") {
    const std::vector<double> g{1.0, 0.0}, ref_ok{1.0, 1.0}, ref_bad{-1.0, 1.0};
    CHECK(agem_project(g, ref_ok) == g);
    const auto p = agem_project(g, ref_bad);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(testing::dot_vec(p, ref_bad) == doctest::Approx(0.0));
    CHECK(agem_project(g, std::vector<double>{0.0, 0.0}) == g);
}

TEST_CASE("box qp solver reaches the active-set optimum") {
    // P = diag(2, 1), q = (-4, 3), v >= 0.5: v1 = 2 free, v2 on the bound.
    const std::vector<double> p{2, 0, 0, 1}, q{-4, 3};
    const DualSolution s = solve_box_qp(p, q, 0.5);
    CHECK(s.converged);
    CHECK(s.v[0] == doctest::Approx(2.0));
    CHECK(s.v[1] == doctest::Approx(0.5));
}

TEST_CASE("gem projection matches the enumerated dual and satisfies its constraints") {
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = testing::pick(rng, 2, 8), k = testing::pick(rng, 1, 3);
        const auto g = testing::random_values(dim, rng);
        testing::Matrix grads;
        for (std::size_t i = 0; i < k; ++i) grads.push_back(testing::random_values(dim, rng));
        const double strength = trial % 2 ? 0.5 : 0.0;
        const GemResult r = gem_project(g, grads, strength);
        CHECK_FALSE(r.fallback);
        for (const auto& gk : grads) CHECK(testing::dot_vec(r.gradient, gk) >= -1e-6);
        const auto oracle = testing::gem_oracle(g, grads, strength);
        for (std::size_t d = 0; d < dim; ++d) CHECK(r.gradient[d] == doctest::Approx(oracle[d]).epsilon(1e-4).scale(1));
    }
}

TEST_CASE("gem with one constraint and zero strength is a-gem") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testing::random_values(5, rng), ref = testing::random_values(5, rng);
        const auto a = agem_project(g, ref);
        const auto b = gem_project(g, {ref}, 0.0).gradient;
        for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-6);
    }
}

namespace {

// Quadratic learner: loss of a transition is 0.5 (theta . x - y)^2 with x
// and y read from the transition's state index and reward.
class ToyLearner : public Learner {
public:
    std::vector<double> theta{0.0, 0.0};
    std::size_t parameter_count() const override { return 2; }
    double loss_gradient(const Batch& batch, std::vector<double>& grad) override {
        grad.assign(2, 0.0);
        double loss = 0.0;
        for (const auto* t : batch) {
            const double x[2] = {1.0, static_cast<double>(t->state.index)};
            const double e = theta[0] * x[0] + theta[1] * x[1] - t->reward;
            loss += 0.5 * e * e;
            for (int i = 0; i < 2; ++i) grad[i] += e * x[i] / static_cast<double>(batch.size());
        }
        return loss / static_cast<double>(batch.size());
    }
    std::vector<double> sample_losses(const Batch& batch) override {
        std::vector<double> out;
        for (const auto* t : batch) {
            std::vector<double> g;
            out.push_back(loss_gradient({t}, g));
        }
        return out;
    }
    void apply_gradient(std::span<const double> g) override {
        ++steps;
        for (int i = 0; i < 2; ++i) theta[i] -= lr * g[i];
    }
    double lr = 0.1;
    std::size_t steps = 0;
};

}  // namespace

TEST_CASE("every strategy takes repeat_update gradient steps per transition") {
    for (auto kind : {StrategyKind::none, StrategyKind::er, StrategyKind::gem, StrategyKind::agem, StrategyKind::nsr}) {
        StrategyConfig cfg;
        cfg.kind = kind;
        cfg.buffer_size = 20;
        cfg.repeat_update = 3;
        auto strategy = make_strategy(cfg);
        ToyLearner learner;
        Rng rng(8);
        for (int sub = 1; sub <= 2; ++sub) {
            strategy->begin_subtask(sub, rng);
            for (int i = 0; i < 30; ++i) {
                Transition t = tagged(i % 5, sub);
                t.reward = sub == 1 ? 1.0 : -1.0;
                strategy->observe(t, learner, rng);
            }
        }
        CHECK(learner.steps == 60 * 3);
        CHECK(strategy->stats().updates == 60 * 3);
        if (kind != StrategyKind::none) {
            CHECK_FALSE(strategy->memory().empty());
            CHECK(strategy->memory().size() <= 20);
        }
    }
}

TEST_CASE("gem keeps the update from raising the loss of a stored sub-task") {
    // Sub-task 1 memory holds copies of one transition, so any reference
    // minibatch gives its exact gradient. The step is small enough that the
    // first-order guarantee dominates the curvature term.
    auto run = [](StrategyKind kind) {
        StrategyConfig cfg;
        cfg.kind = kind;
        cfg.buffer_size = 40;
        cfg.reference_batch_size = 10;
        auto strategy = make_strategy(cfg);
        ToyLearner learner;
        Rng rng(9);
        strategy->begin_subtask(1, rng);
        for (int i = 0; i < 40; ++i) {
            Transition t = tagged(1);
            t.reward = 1.0;
            strategy->observe(t, learner, rng);
        }
        learner.lr = 1e-3;
        strategy->begin_subtask(2, rng);
        const Transition probe = [] {
            Transition t = tagged(1);
            t.reward = 1.0;
            return t;
        }();
        double worst_rise = -1.0;
        for (int i = 0; i < 30; ++i) {
            Transition t = tagged(2 + i % 3, 2);
            t.reward = -1.0;
            std::vector<double> g;
            const double before = learner.loss_gradient({&probe}, g);
            strategy->observe(t, learner, rng);
            worst_rise = std::max(worst_rise, learner.loss_gradient({&probe}, g) - before);
        }
        return std::pair{worst_rise, strategy->stats().projections};
    };
    const auto [gem_rise, gem_projections] = run(StrategyKind::gem);
    const auto [plain_rise, plain_projections] = run(StrategyKind::none);
    CHECK(gem_projections > 0);
    CHECK(gem_rise <= 1e-5);
    CHECK(plain_rise > 1e-4);
}

TEST_CASE("buffer dumps round-trip") {
    Transition a = tagged(3, 2), b = tagged(7, 1);
    a.state.pixels = {1, 2, 3};
    a.next_state.pixels = {4, 5, 6};
    a.reward = -0.25;
    b.terminal = true;
    b.action = 8;
    const auto dir = std::filesystem::temp_directory_path() / "crl_dump_test";
    std::filesystem::create_directories(dir);
    write_buffer_dump(dir / "m.jsonl", dir / "m.bin", {&a, &b});
    const auto back = read_buffer_dump(dir / "m.jsonl", dir / "m.bin");
    REQUIRE(back.size() == 2);
    CHECK(back[0] == a);
    CHECK(back[1] == b);
    std::filesystem::remove_all(dir);
}
