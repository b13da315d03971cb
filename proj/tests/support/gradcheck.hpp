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

// Central finite-difference checks of the layer kernels against their
// analytic backward passes. Shared by the unit tests and the acceptance
// binary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "crl/numerics/layers.hpp"
#include "crl/numerics/loss.hpp"
#include "crl/numerics/network.hpp"
#include "crl/rng.hpp"

namespace crl::testing {

inline constexpr double kFdStep = 1e-5;

// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
// gradient is zero from dividing round-off by round-off.
inline double relative_error(double analytic, double numeric, double floor = 1e-4) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

struct GradCheck {
    double max_rel = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;

    void merge(const GradCheck& o) {
        max_rel = std::max(max_rel, o.max_rel);
        checked += o.checked;
        skipped += o.skipped;
    }
};

// Compares analytic[i] with (f(x_i + h) - f(x_i - h)) / 2h for every entry
// of `x`, restoring x afterwards.
inline GradCheck compare_fd(std::vector<double>& x, const std::vector<double>& analytic,
                            const std::function<double()>& f, double h = kFdStep) {
    GradCheck r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = f();
        x[i] = saved - h;
        const double down = f();
        x[i] = saved;
        r.max_rel = std::max(r.max_rel, relative_error(analytic[i], (up - down) / (2 * h)));
        ++r.checked;
    }
    return r;
}

inline std::vector<double> random_values(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

inline double weighted_sum(const numerics::Tensor& t, const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * u[i];
    return s;
}

inline std::vector<double> as_vector(const numerics::Tensor& t) { return {t.values().begin(), t.values().end()}; }

// Scalar objective L = <u, layer(x)> with random u; each check perturbs one
// argument tensor at a time.

inline GradCheck check_conv(Rng& rng) {
    using numerics::Tensor;
    const std::size_t rows = pick(rng, 1, 5), cols = pick(rng, 2, 8), ch = pick(rng, 1, 3), filters = pick(rng, 1, 3);
    const std::size_t kr = pick(rng, 1, rows), kc = pick(rng, 1, std::min<std::size_t>(cols, 4));
    const std::size_t sr = pick(rng, 1, 2), sc = pick(rng, 1, 2);
    Tensor in({rows, cols, ch}, random_values(rows * cols * ch, rng));
    Tensor w({kr, kc, ch, filters}, random_values(kr * kc * ch * filters, rng));
    Tensor b({filters}, random_values(filters, rng));
    const Tensor y = numerics::conv_forward(in, w, b, sr, sc);
    const auto u = random_values(y.size(), rng);
    Tensor gw(w.shape()), gb(b.shape()), gin(in.shape());
    numerics::conv_backward(in, w, Tensor(y.shape(), u), sr, sc, gw, gb, &gin);

    GradCheck r;
    auto xv = as_vector(in), wv = as_vector(w), bv = as_vector(b);
    auto f = [&] {
        return weighted_sum(numerics::conv_forward(Tensor(in.shape(), xv), Tensor(w.shape(), wv),
                                                   Tensor(b.shape(), bv), sr, sc),
                            u);
    };
    r.merge(compare_fd(xv, as_vector(gin), f));
    r.merge(compare_fd(wv, as_vector(gw), f));
    r.merge(compare_fd(bv, as_vector(gb), f));
    return r;
}

inline GradCheck check_dense(Rng& rng) {
    using numerics::Tensor;
    const std::size_t n = pick(rng, 1, 12), units = pick(rng, 1, 6);
    Tensor in({n}, random_values(n, rng));
    Tensor w({units, n}, random_values(units * n, rng));
    Tensor b({units}, random_values(units, rng));
    const auto u = random_values(units, rng);
    Tensor gw(w.shape()), gb(b.shape()), gin(in.shape());
    numerics::dense_backward(in, w, Tensor({units}, u), gw, gb, &gin);

    GradCheck r;
    auto xv = as_vector(in), wv = as_vector(w), bv = as_vector(b);
    auto f = [&] {
        return weighted_sum(
            numerics::dense_forward(Tensor(in.shape(), xv), Tensor(w.shape(), wv), Tensor(b.shape(), bv)), u);
    };
    r.merge(compare_fd(xv, as_vector(gin), f));
    r.merge(compare_fd(wv, as_vector(gw), f));
    r.merge(compare_fd(bv, as_vector(gb), f));
    return r;
}

// Inputs are a shuffled grid with spacing 0.01, so no perturbation of size h
// can change which element wins a pooling window.
inline GradCheck check_maxpool(Rng& rng) {
    using numerics::Tensor;
    const std::size_t pr = pick(rng, 1, 2), pc = pick(rng, 1, 3);
    const std::size_t rows = pr * pick(rng, 1, 3), cols = pc * pick(rng, 1, 4), ch = pick(rng, 1, 3);
    const std::size_t n = rows * cols * ch;
    std::vector<double> xv(n);
    for (std::size_t i = 0; i < n; ++i) xv[i] = 0.01 * static_cast<double>(i);
    for (std::size_t i = n; i > 1; --i) std::swap(xv[i - 1], xv[static_cast<std::size_t>(rng.below(i))]);
    const numerics::Shape shape{rows, cols, ch};
    std::vector<std::size_t> argmax;
    const Tensor y = numerics::maxpool_forward(Tensor(shape, xv), pr, pc, argmax);
    const auto u = random_values(y.size(), rng);
    const Tensor g = numerics::maxpool_backward(shape, argmax, Tensor(y.shape(), u));
    auto f = [&] {
        std::vector<std::size_t> am;
        return weighted_sum(numerics::maxpool_forward(Tensor(shape, xv), pr, pc, am), u);
    };
    return compare_fd(xv, as_vector(g), f);
}

// Inputs keep at least 1e-3 away from the kink at zero.
inline GradCheck check_relu(Rng& rng) {
    using numerics::Tensor;
    const std::size_t n = pick(rng, 1, 20);
    std::vector<double> xv(n);
    for (auto& x : xv) {
        const double m = rng.uniform(1e-3, 1.0);
        x = rng.below(2) ? m : -m;
    }
    const auto u = random_values(n, rng);
    const Tensor g = numerics::relu_backward(Tensor({n}, xv), Tensor({n}, u));
    auto f = [&] { return weighted_sum(numerics::relu_forward(Tensor({n}, xv)), u); };
    return compare_fd(xv, as_vector(g), f);
}

// Errors keep at least 1e-3 away from the quadratic/linear seam at |e| = delta.
inline GradCheck check_huber(Rng& rng) {
    const std::size_t n = pick(rng, 1, 9);
    const double delta = rng.uniform(0.2, 2.0);
    std::vector<double> pred(n), target(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = rng.uniform(-2.0, 2.0);
        double e;
        do e = rng.uniform(-3.0 * delta, 3.0 * delta);
        while (std::abs(std::abs(e) - delta) < 1e-3);
        pred[i] = target[i] + e;
    }
    const auto analytic = numerics::huber_loss(pred, target, delta).gradient;
    auto f = [&] { return numerics::huber_loss(pred, target, delta).loss; };
    return compare_fd(pred, analytic, f);
}

// ReLU signs at every rectifier input plus every maxpool winner. Two
// parameter points with the same pattern lie on one smooth piece.
inline std::vector<std::size_t> kink_pattern(const std::vector<numerics::LayerSpec>& layers,
                                             const numerics::ForwardTrace& trace) {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (layers[l].kind == numerics::LayerKind::relu)
            for (double x : trace.activations[l].values()) out.push_back(x > 0.0);
        for (std::size_t a : trace.argmax[l]) out.push_back(a);
    }
    return out;
}

// Whole small network, all parameters at once through the flat layout.
// A coordinate whose +-h probe changes the kink pattern straddles a
// non-differentiable point; it is counted as skipped rather than compared.
inline GradCheck check_network(Rng& rng) {
    using numerics::LayerSpec;
    const std::vector<LayerSpec> layers{LayerSpec::conv(2, 2, 3), LayerSpec::maxpool(1, 2), LayerSpec::relu(),
                                        LayerSpec::conv(3, 1, 2), LayerSpec::relu(),        LayerSpec::flatten(),
                                        LayerSpec::dense(5),      LayerSpec::relu(),        LayerSpec::dense(3),
                                        LayerSpec::linear()};
    numerics::Network net(layers, {3, 10, 2});
    net.initialize(rng);
    // Zero biases put every unit fed by an all-zero patch exactly on a
    // ReLU kink.
    for (auto& block : net.parameters().blocks())
        for (double& b : block.bias.values()) b = rng.uniform(-0.2, 0.2);
    numerics::Tensor in({3, 10, 2}, random_values(60, rng, 0.0, 1.0));
    numerics::ForwardTrace trace;
    const numerics::Tensor y = net.forward(in, trace);
    const auto u = random_values(y.size(), rng);
    numerics::ParameterSet grads = net.parameters().zeros_like();
    net.backward(trace, numerics::Tensor(y.shape(), u), grads);
    const auto base = kink_pattern(layers, trace);
    const auto analytic = grads.flatten();

    auto flat = net.parameters().flatten();
    numerics::Network probe = net;
    bool crossed = false;
    auto f = [&] {
        probe.parameters().assign_flat(flat);
        numerics::ForwardTrace t;
        const double v = weighted_sum(probe.forward(in, t), u);
        crossed = crossed || kink_pattern(layers, t) != base;
        return v;
    };
    GradCheck r;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double saved = flat[i];
        crossed = false;
        flat[i] = saved + kFdStep;
        const double up = f();
        flat[i] = saved - kFdStep;
        const double down = f();
        flat[i] = saved;
        if (crossed) {
            ++r.skipped;
            continue;
        }
        r.max_rel = std::max(r.max_rel, relative_error(analytic[i], (up - down) / (2 * kFdStep)));
        ++r.checked;
    }
    return r;
}

}  // namespace crl::testing
