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

#include "crl/replay/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "crl/numerics/tensor.hpp"

namespace crl::replay {

using numerics::dot;

std::vector<double> agem_project(std::span<const double> g, std::span<const double> g_ref) {
    const double gr = dot(g, g_ref);
    std::vector<double> out(g.begin(), g.end());
    if (gr >= 0.0) return out;
    const double rr = dot(g_ref, g_ref);
    if (rr == 0.0) {
        std::fprintf(stderr, "warning: a-gem reference gradient is zero; skipping projection\n");
        return out;
    }
    const double c = gr / rr;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * g_ref[i];
    return out;
}

namespace {

// Solves a (n x n, row-major) x = b by Gaussian elimination with partial
// pivoting. Returns false when a pivot falls below `tiny`.
bool solve_dense(std::vector<double> a, std::vector<double> b, std::vector<double>& x, double tiny) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (std::abs(a[piv * n + c]) <= tiny) return false;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return true;
}

}  // namespace

DualSolution solve_box_qp(std::span<const double> p, std::span<const double> q, double lower,
                          std::size_t max_iterations, double tolerance) {
    const std::size_t k = q.size();
    if (p.size() != k * k) throw std::invalid_argument("solve_box_qp: P must be k x k");
    DualSolution sol;
    sol.v.assign(k, lower);

    // Shift to w = v - lower >= 0: min 0.5 w'Pw + c'w with c = q + P lower 1.
    // Lawson-Hanson active set: grow the free set by the coordinate with the
    // most negative gradient, solve the free block exactly, and step back
    // toward feasibility whenever a free coordinate would turn negative.
    std::vector<double> c(k);
    double scale = 1.0, diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        c[i] = q[i];
        for (std::size_t j = 0; j < k; ++j) c[i] += p[i * k + j] * lower;
        scale = std::max(scale, std::abs(q[i]));
        diag = std::max(diag, p[i * k + i]);
    }
    scale = std::max(scale, diag);
    const double threshold = tolerance * scale;
    const double tiny = 1e-14 * std::max(diag, 1e-300);

    std::vector<double> w(k, 0.0), grad(k), z;
    std::vector<bool> free(k, false);
    auto gradient = [&] {
        for (std::size_t i = 0; i < k; ++i) {
            double gi = c[i];
            for (std::size_t j = 0; j < k; ++j) gi += p[i * k + j] * w[j];
            grad[i] = gi;
        }
    };
    auto finish = [&](bool converged) {
        for (std::size_t i = 0; i < k; ++i) sol.v[i] = lower + w[i];
        sol.converged = converged;
        return sol;
    };

    bool stalled = false;
    while (!stalled && sol.iterations < max_iterations) {
        gradient();
        std::size_t enter = k;
        for (std::size_t i = 0; i < k; ++i)
            if (!free[i] && grad[i] < -threshold && (enter == k || grad[i] < grad[enter])) enter = i;
        if (enter == k) return finish(true);
        free[enter] = true;

        while (sol.iterations < max_iterations) {
            ++sol.iterations;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < k; ++i)
                if (free[i]) idx.push_back(i);
            const std::size_t n = idx.size();
            std::vector<double> a(n * n), rhs(n);
            for (std::size_t r = 0; r < n; ++r) {
                rhs[r] = -c[idx[r]];
                for (std::size_t s2 = 0; s2 < n; ++s2) a[r * n + s2] = p[idx[r] * k + idx[s2]];
            }
            if (!solve_dense(a, rhs, z, tiny)) {
                // Numerically dependent free block; the KKT test below
                // decides whether the current point is good enough.
                free[enter] = false;
                stalled = true;
                break;
            }
            bool positive = true;
            for (double zi : z) positive = positive && zi > 0.0;
            if (positive) {
                for (std::size_t r = 0; r < n; ++r) w[idx[r]] = z[r];
                break;
            }
            double alpha = 1.0;
            for (std::size_t r = 0; r < n; ++r)
                if (z[r] <= 0.0) alpha = std::min(alpha, w[idx[r]] / (w[idx[r]] - z[r]));
            for (std::size_t r = 0; r < n; ++r) {
                w[idx[r]] += alpha * (z[r] - w[idx[r]]);
                if (w[idx[r]] <= 0.0 || (z[r] <= 0.0 && w[idx[r]] <= 1e-15 * scale)) {
                    w[idx[r]] = 0.0;
                    free[idx[r]] = false;
                }
            }
        }
    }
    gradient();
    bool kkt = true;
    for (std::size_t i = 0; i < k; ++i)
        kkt = kkt && (free[i] ? std::abs(grad[i]) <= threshold : grad[i] >= -threshold);
    return finish(kkt);
}

GemResult gem_project(std::span<const double> g, const std::vector<std::vector<double>>& task_gradients,
                      double memory_strength, std::size_t max_iterations, double tolerance) {
    if (task_gradients.empty()) throw std::invalid_argument("gem_project: needs at least one task gradient");
    if (memory_strength < 0.0) throw std::invalid_argument("gem_project: memory strength must be non-negative");
    const std::size_t k = task_gradients.size();
    GemResult r;
    r.gradient.assign(g.begin(), g.end());

    std::vector<double> q(k);
    bool violated = false;
    for (std::size_t i = 0; i < k; ++i) {
        if (task_gradients[i].size() != g.size()) throw numerics::ShapeError("gem_project: gradient length mismatch");
        q[i] = dot(g, task_gradients[i]);
        violated = violated || q[i] < 0.0;
    }
    if (!violated) return r;
    r.projected = true;

    std::vector<double> p(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) p[i * k + j] = p[j * k + i] = dot(task_gradients[i], task_gradients[j]);

    const DualSolution dual = solve_box_qp(p, q, memory_strength, max_iterations, tolerance);
    r.iterations = dual.iterations;
    if (!dual.converged) {
        std::fprintf(stderr, "warning: gem dual did not converge in %zu iterations; using a-gem on the mean gradient\n",
                     dual.iterations);
        std::vector<double> mean(g.size(), 0.0);
        for (const auto& tg : task_gradients)
            for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += tg[i] / static_cast<double>(k);
        r.gradient = agem_project(g, mean);
        r.fallback = true;
        return r;
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < r.gradient.size(); ++i) r.gradient[i] += dual.v[j] * task_gradients[j][i];
    return r;
}

}  // namespace crl::replay
