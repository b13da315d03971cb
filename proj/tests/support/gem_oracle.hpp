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

// Exact solution of the GEM dual for small k by enumerating active sets:
// min 0.5 v'Pv + q'v  s.t. v >= m,  P = G G', q = G g.
// For every subset F of free coordinates, the others sit on the bound and
// v_F solves P_FF v_F = -(q_F + P_FB m). A KKT point (v_F >= m and a
// non-negative gradient on the bound coordinates) is the global minimum.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace crl::testing {

using Matrix = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting; empty on a singular system.
inline std::optional<std::vector<double>> solve_linear(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

inline double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Projected gradient g + G'v* per the dual above, or g itself when no
// constraint <g, g_k> >= 0 is violated.
inline std::vector<double> gem_oracle(const std::vector<double>& g, const Matrix& grads, double m) {
    const std::size_t k = grads.size();
    bool violated = false;
    for (const auto& gk : grads) violated = violated || dot_vec(g, gk) < 0.0;
    if (!violated) return g;

    Matrix p(k, std::vector<double>(k));
    std::vector<double> q(k);
    for (std::size_t i = 0; i < k; ++i) {
        q[i] = dot_vec(grads[i], g);
        for (std::size_t j = 0; j < k; ++j) p[i][j] = dot_vec(grads[i], grads[j]);
    }
    auto objective = [&](const std::vector<double>& v) {
        double o = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            o += q[i] * v[i];
            for (std::size_t j = 0; j < k; ++j) o += 0.5 * v[i] * p[i][j] * v[j];
        }
        return o;
    };

    std::vector<double> best;
    double best_obj = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) free.push_back(i);
        std::vector<double> v(k, m);
        if (!free.empty()) {
            Matrix a(free.size(), std::vector<double>(free.size()));
            std::vector<double> rhs(free.size());
            for (std::size_t r = 0; r < free.size(); ++r) {
                rhs[r] = -q[free[r]];
                for (std::size_t j = 0; j < k; ++j)
                    if (!(mask & (1u << j))) rhs[r] -= p[free[r]][j] * m;
                for (std::size_t c = 0; c < free.size(); ++c) a[r][c] = p[free[r]][free[c]];
            }
            const auto sol = solve_linear(a, rhs);
            if (!sol) continue;
            for (std::size_t r = 0; r < free.size(); ++r) v[free[r]] = (*sol)[r];
        }
        bool feasible = true;
        for (std::size_t i = 0; i < k; ++i) {
            if (v[i] < m - 1e-12) feasible = false;
            if (!(mask & (1u << i))) {
                double grad = q[i];
                for (std::size_t j = 0; j < k; ++j) grad += p[i][j] * v[j];
                if (grad < -1e-9) feasible = false;
            }
        }
        if (!feasible) continue;
        const double o = objective(v);
        if (o < best_obj) {
            best_obj = o;
            best = v;
        }
    }
    std::vector<double> out = g;
    if (best.empty()) return out;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t d = 0; d < g.size(); ++d) out[d] += best[i] * grads[i][d];
    return out;
}

}  // namespace crl::testing
