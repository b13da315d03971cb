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

namespace crl::replay {

// A-GEM: returns g when <g, g_ref> >= 0 (bit-exact), otherwise
// g - (<g, g_ref> / <g_ref, g_ref>) g_ref. A zero g_ref leaves g unchanged.
std::vector<double> agem_project(std::span<const double> g, std::span<const double> g_ref);

struct DualSolution {
    std::vector<double> v;
    std::size_t iterations = 0;
    bool converged = false;
};

// min_v 0.5 v'Pv + q'v subject to v >= lower, P symmetric PSD (k x k,
// row-major). Exact active-set method; `max_iterations` caps the linear
// solves and `tolerance` scales the optimality test.
DualSolution solve_box_qp(std::span<const double> p, std::span<const double> q, double lower,
                          std::size_t max_iterations = 1000, double tolerance = 1e-8);

struct GemResult {
    std::vector<double> gradient;
    bool projected = false;  // some constraint was violated
    bool fallback = false;   // dual solver missed its budget; A-GEM on the mean gradient
    std::size_t iterations = 0;
};

// GEM: if every <g, g_k> >= 0 returns g. Otherwise g + G'v with v solving
// the dual over G = task gradients (rows) and v >= memory_strength, so that
// <result, g_k> >= 0 for every k.
GemResult gem_project(std::span<const double> g, const std::vector<std::vector<double>>& task_gradients,
                      double memory_strength = 0.5, std::size_t max_iterations = 1000, double tolerance = 1e-8);

}  // namespace crl::replay
