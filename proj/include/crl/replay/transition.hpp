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
#include <vector>

#include "crl/agents/state.hpp"

namespace crl::replay {

struct Transition {
    agents::State state;
    std::size_t action = 0;  // zero-based action id
    double reward = 0.0;
    agents::State next_state;
    bool terminal = false;
    int subtask = 1;

    friend bool operator==(const Transition&, const Transition&) = default;
};

using Batch = std::vector<const Transition*>;

// Anything trainable by gradient steps on transitions. Gradients are flat
// vectors in the model's canonical parameter order.
class Learner {
public:
    virtual ~Learner() = default;

    virtual std::size_t parameter_count() const = 0;
    // Mean loss over `batch`; `gradient` receives its flattened gradient.
    virtual double loss_gradient(const Batch& batch, std::vector<double>& gradient) = 0;
    // Per-transition loss under the current parameters.
    virtual std::vector<double> sample_losses(const Batch& batch) = 0;
    // theta <- theta - learning_rate * gradient
    virtual void apply_gradient(std::span<const double> gradient) = 0;
};

}  // namespace crl::replay
