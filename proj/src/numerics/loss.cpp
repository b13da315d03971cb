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

#include "crl/numerics/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "crl/numerics/tensor.hpp"

namespace crl::numerics {

double huber_value(double error, double delta) {
    const double a = std::abs(error);
    return a <= delta ? 0.5 * error * error : delta * (a - 0.5 * delta);
}

double huber_slope(double error, double delta) {
    return std::clamp(error, -delta, delta);
}

LossResult huber_loss(std::span<const double> prediction, std::span<const double> target, double delta) {
    if (prediction.size() != target.size())
        throw ShapeError("huber_loss: length mismatch " + std::to_string(prediction.size()) + " vs " +
                         std::to_string(target.size()));
    if (!(delta > 0.0)) throw std::invalid_argument("huber_loss: delta must be positive");
    LossResult r;
    r.gradient.resize(prediction.size());
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double e = prediction[i] - target[i];
        r.loss += huber_value(e, delta);
        r.gradient[i] = huber_slope(e, delta);
    }
    return r;
}

}  // namespace crl::numerics
