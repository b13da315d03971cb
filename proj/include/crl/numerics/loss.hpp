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

#include <span>
#include <vector>

namespace crl::numerics {

struct LossResult {
    double loss = 0.0;
    std::vector<double> gradient;  // d loss / d prediction
};

// Summed Huber loss over e = prediction - target:
// 0.5 e^2 where |e| <= delta, delta (|e| - delta / 2) elsewhere.
// The gradient is clamp(e, -delta, delta).
LossResult huber_loss(std::span<const double> prediction, std::span<const double> target, double delta = 1.0);

double huber_value(double error, double delta = 1.0);
double huber_slope(double error, double delta = 1.0);

}  // namespace crl::numerics
