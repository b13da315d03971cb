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
#include <span>

#include "crl/rng.hpp"

namespace crl::agents {

// Decaying epsilon-greedy schedule. reset(t) sets epsilon to 1/t for the
// t-th sub-task (1-based); tick() applies epsilon <- max(stop, epsilon (1 - step)).
class EpsilonSchedule {
public:
    EpsilonSchedule(double stop = 0.005, double step = 0.001);

    double value() const { return value_; }
    double stop() const { return stop_; }
    double step() const { return step_; }

    void reset(int subtask);
    void tick();

private:
    double stop_;
    double step_;
    double value_ = 1.0;
};

// With probability epsilon a uniform action, otherwise the argmax with the
// lowest index winning ties. epsilon == 0 draws nothing from `rng`.
std::size_t select_action(std::span<const double> q_values, double epsilon, Rng& rng);

std::size_t argmax(std::span<const double> values);

}  // namespace crl::agents
