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

#include "crl/numerics/layers.hpp"
#include "crl/numerics/tensor.hpp"
#include "crl/rng.hpp"

namespace crl::numerics {

struct ParamBlock {
    std::size_t layer = 0;  // index into the owning network's layer list
    Tensor weight;
    Tensor bias;

    friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

// Trainable parameters in canonical order: layer order, weight before bias,
// each tensor row-major. flatten()/unflatten() use exactly this order.
class ParameterSet {
public:
    ParameterSet() = default;
    explicit ParameterSet(std::vector<ParamBlock> blocks) : blocks_(std::move(blocks)) {}

    std::vector<ParamBlock>& blocks() { return blocks_; }
    const std::vector<ParamBlock>& blocks() const { return blocks_; }

    std::size_t total_count() const;

    std::vector<double> flatten() const;
    // Copies `flat` into a set with this set's layout.
    ParameterSet unflatten(std::span<const double> flat) const;
    void assign_flat(std::span<const double> flat);

    ParameterSet zeros_like() const;
    void set_zero();
    bool same_layout(const ParameterSet& other) const;

    // this += scale * other
    void add_scaled(const ParameterSet& other, double scale);
    void scale(double factor);
    bool all_finite() const;

    friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

private:
    std::vector<ParamBlock> blocks_;
};

// theta <- theta - lr * grad
void sgd_step(ParameterSet& params, const ParameterSet& grads, double lr);
void sgd_step(ParameterSet& params, std::span<const double> flat_grads, double lr);

// Activations kept by a forward pass for the matching backward pass.
struct ForwardTrace {
    std::vector<Tensor> activations;               // activations[i] is the input of layer i
    std::vector<std::vector<std::size_t>> argmax;  // per maxpool layer, else empty
};

class Network {
public:
    Network() = default;
    Network(std::vector<LayerSpec> layers, Shape input_shape);

    // The default Q-network: default_input_shape() -> 9 Q-values.
    static Network default_network();

    const std::vector<LayerSpec>& layers() const { return layers_; }
    const Shape& input_shape() const { return input_shape_; }
    const Shape& output_shape() const { return shapes_.back(); }
    // shapes()[i] is the input shape of layer i; the last entry is the output.
    const std::vector<Shape>& shapes() const { return shapes_; }

    ParameterSet& parameters() { return params_; }
    const ParameterSet& parameters() const { return params_; }
    void set_parameters(ParameterSet params);

    // Uniform fan-in init: He (sqrt(6/fan_in)) for layers followed by ReLU,
    // sqrt(3/fan_in) otherwise. Biases zero.
    void initialize(Rng& rng);

    // Pure function of (parameters, input). Throws ShapeError or NonFiniteError.
    Tensor forward(const Tensor& input) const;
    Tensor forward(const Tensor& input, ForwardTrace& trace) const;

    // Accumulates parameter gradients of <upstream, output> into `grads`.
    // Returns the input gradient when `want_input_grad`, else an empty tensor.
    Tensor backward(const ForwardTrace& trace, const Tensor& upstream, ParameterSet& grads,
                    bool want_input_grad = false) const;

private:
    const ParamBlock& block_for(std::size_t layer) const;

    std::vector<LayerSpec> layers_;
    Shape input_shape_;
    std::vector<Shape> shapes_;
    std::vector<std::ptrdiff_t> block_index_;  // layer -> block, -1 if none
    ParameterSet params_;
};

}  // namespace crl::numerics
