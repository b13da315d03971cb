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

// Five-state deterministic chain. Action 0 moves left, action 1 moves right
// (both clamped at the ends); entering the rightmost state pays 1.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "crl/agents/tabular.hpp"

namespace crl::testing {

inline constexpr std::size_t kChainStates = 5;
inline constexpr std::size_t kChainActions = 2;

inline std::size_t chain_next(std::size_t s, std::size_t a) {
    if (a == 0) return s == 0 ? 0 : s - 1;
    return std::min(s + 1, kChainStates - 1);
}

inline double chain_reward(std::size_t s, std::size_t a) { return chain_next(s, a) == kChainStates - 1 ? 1.0 : 0.0; }

// Q* by value iteration until the sup-norm change drops below 1e-15.
inline agents::QTable chain_value_iteration(double gamma) {
    agents::QTable q(kChainStates, kChainActions);
    for (int it = 0; it < 100000; ++it) {
        agents::QTable next = q;
        double delta = 0.0;
        for (std::size_t s = 0; s < kChainStates; ++s)
            for (std::size_t a = 0; a < kChainActions; ++a) {
                next.at(s, a) = chain_reward(s, a) + gamma * q.max_value(chain_next(s, a));
                delta = std::max(delta, std::abs(next.at(s, a) - q.at(s, a)));
            }
        q = next;
        if (delta < 1e-15) break;
    }
    return q;
}

inline double max_abs_diff(const agents::QTable& a, const agents::QTable& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
    return d;
}

// Sweeps every (state, action) pair in order with the given rule until the
// table is within `tol` of Q* or `max_sweeps` runs out. Returns the final error.
inline double chain_q_learning(bool speedy, double alpha, double gamma, std::size_t max_sweeps, double tol) {
    const agents::QTable star = chain_value_iteration(gamma);
    agents::QTable q(kChainStates, kChainActions), prev(kChainStates, kChainActions);
    double err = max_abs_diff(q, star);
    for (std::size_t sweep = 0; sweep < max_sweeps && err > tol; ++sweep) {
        for (std::size_t s = 0; s < kChainStates; ++s)
            for (std::size_t a = 0; a < kChainActions; ++a) {
                if (speedy)
                    agents::qtable_update_speedy(q, prev, s, a, chain_reward(s, a), chain_next(s, a), false, alpha, gamma);
                else
                    agents::qtable_update(q, s, a, chain_reward(s, a), chain_next(s, a), false, alpha, gamma);
            }
        err = max_abs_diff(q, star);
    }
    return err;
}

}  // namespace crl::testing
