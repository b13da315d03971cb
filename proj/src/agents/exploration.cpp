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

#include "crl/agents/exploration.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace crl::agents {

EpsilonSchedule::EpsilonSchedule(double stop, double step) : stop_(stop), step_(step) {
    if (!(stop_ >= 0.0 && stop_ <= 1.0)) throw std::invalid_argument("epsilon stop must be in [0, 1]");
    if (!(step_ >= 0.0 && step_ < 1.0)) throw std::invalid_argument("epsilon step must be in [0, 1)");
}

void EpsilonSchedule::reset(int subtask) {
    if (subtask < 1) throw std::invalid_argument("epsilon reset: sub-task ordinal must be >= 1, got " +
                                                 std::to_string(subtask));
    value_ = std::max(stop_, 1.0 / subtask);
}

void EpsilonSchedule::tick() {
    value_ = std::max(stop_, value_ * (1.0 - step_));
}

std::size_t argmax(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

std::size_t select_action(std::span<const double> q_values, double epsilon, Rng& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (epsilon > 0.0 && rng.uniform() < epsilon) return static_cast<std::size_t>(rng.below(q_values.size()));
    return argmax(q_values);
}

}  // namespace crl::agents
