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

#include "crl/numerics/network.hpp"

#include <cmath>

namespace crl::numerics {

std::size_t ParameterSet::total_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks_) n += b.weight.size() + b.bias.size();
    return n;
}

std::vector<double> ParameterSet::flatten() const {
    std::vector<double> flat;
    flat.reserve(total_count());
    for (const auto& b : blocks_) {
        flat.insert(flat.end(), b.weight.values().begin(), b.weight.values().end());
        flat.insert(flat.end(), b.bias.values().begin(), b.bias.values().end());
    }
    return flat;
}

void ParameterSet::assign_flat(std::span<const double> flat) {
    if (flat.size() != total_count())
        throw ShapeError("unflatten: expected " + std::to_string(total_count()) + " values, got " +
                         std::to_string(flat.size()));
    std::size_t pos = 0;
    for (auto& b : blocks_) {
        for (auto& v : b.weight.values()) v = flat[pos++];
        for (auto& v : b.bias.values()) v = flat[pos++];
    }
}

ParameterSet ParameterSet::unflatten(std::span<const double> flat) const {
    ParameterSet out = *this;
    out.assign_flat(flat);
    return out;
}

ParameterSet ParameterSet::zeros_like() const {
    ParameterSet out = *this;
    out.set_zero();
    return out;
}

void ParameterSet::set_zero() {
    for (auto& b : blocks_) {
        b.weight.fill(0.0);
        b.bias.fill(0.0);
    }
}

bool ParameterSet::same_layout(const ParameterSet& other) const {
    if (blocks_.size() != other.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].layer != other.blocks_[i].layer ||
            blocks_[i].weight.shape() != other.blocks_[i].weight.shape() ||
            blocks_[i].bias.shape() != other.blocks_[i].bias.shape())
            return false;
    }
    return true;
}

void ParameterSet::add_scaled(const ParameterSet& other, double scale) {
    if (!same_layout(other)) throw ShapeError("parameter sets differ in layout");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        auto w = blocks_[i].weight.values();
        auto ow = other.blocks_[i].weight.values();
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += scale * ow[j];
        auto b = blocks_[i].bias.values();
        auto ob = other.blocks_[i].bias.values();
        for (std::size_t j = 0; j < b.size(); ++j) b[j] += scale * ob[j];
    }
}

void ParameterSet::scale(double factor) {
    for (auto& b : blocks_) {
        for (auto& v : b.weight.values()) v *= factor;
        for (auto& v : b.bias.values()) v *= factor;
    }
}

bool ParameterSet::all_finite() const {
    for (const auto& b : blocks_)
        if (!b.weight.all_finite() || !b.bias.all_finite()) return false;
    return true;
}

void sgd_step(ParameterSet& params, const ParameterSet& grads, double lr) {
    if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: learning rate must be positive");
    params.add_scaled(grads, -lr);
}

void sgd_step(ParameterSet& params, std::span<const double> flat_grads, double lr) {
    if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: learning rate must be positive");
    if (flat_grads.size() != params.total_count())
        throw ShapeError("sgd_step: gradient length " + std::to_string(flat_grads.size()) +
                         " does not match " + std::to_string(params.total_count()) + " parameters");
    std::size_t pos = 0;
    for (auto& b : params.blocks()) {
        for (auto& v : b.weight.values()) v -= lr * flat_grads[pos++];
        for (auto& v : b.bias.values()) v -= lr * flat_grads[pos++];
    }
}

Network::Network(std::vector<LayerSpec> layers, Shape input_shape)
    : layers_(std::move(layers)), input_shape_(std::move(input_shape)) {
    if (layers_.empty()) throw ShapeError("network needs at least one layer");
    shapes_.push_back(input_shape_);
    std::vector<ParamBlock> blocks;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Shape& in = shapes_.back();
        if (layers_[i].has_parameters()) {
            block_index_.push_back(static_cast<std::ptrdiff_t>(blocks.size()));
            blocks.push_back({i, Tensor(weight_shape(layers_[i], in)), Tensor(bias_shape(layers_[i], in))});
        } else {
            block_index_.push_back(-1);
        }
        shapes_.push_back(numerics::output_shape(layers_[i], in));
    }
    params_ = ParameterSet(std::move(blocks));
}

Network Network::default_network() {
    return Network(default_architecture(), default_input_shape());
}

void Network::set_parameters(ParameterSet params) {
    if (!params.same_layout(params_)) throw ShapeError("parameter layout does not match the network");
    params_ = std::move(params);
}

void Network::initialize(Rng& rng) {
    for (auto& b : params_.blocks()) {
        bool feeds_relu = false;
        for (std::size_t j = b.layer + 1; j < layers_.size(); ++j) {
            if (layers_[j].kind == LayerKind::relu) { feeds_relu = true; break; }
            if (layers_[j].kind != LayerKind::maxpool) break;
        }
        const Shape& ws = b.weight.shape();
        const std::size_t fan_in = layers_[b.layer].kind == LayerKind::conv ? ws[0] * ws[1] * ws[2] : ws[1];
        const double limit = std::sqrt((feeds_relu ? 6.0 : 3.0) / static_cast<double>(fan_in));
        for (auto& v : b.weight.values()) v = rng.uniform(-limit, limit);
        b.bias.fill(0.0);
    }
}

const ParamBlock& Network::block_for(std::size_t layer) const {
    return params_.blocks()[static_cast<std::size_t>(block_index_[layer])];
}

Tensor Network::forward(const Tensor& input) const {
    ForwardTrace trace;
    return forward(input, trace);
}

Tensor Network::forward(const Tensor& input, ForwardTrace& trace) const {
    if (input.shape() != input_shape_)
        throw ShapeError("network input " + shape_string(input.shape()) + " does not match " +
                         shape_string(input_shape_));
    trace.activations.clear();
    trace.argmax.assign(layers_.size(), {});
    trace.activations.reserve(layers_.size());
    Tensor x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& l = layers_[i];
        Tensor y;
        switch (l.kind) {
            case LayerKind::conv: {
                const auto& b = block_for(i);
                y = conv_forward(x, b.weight, b.bias, l.stride_rows, l.stride_cols);
                break;
            }
            case LayerKind::maxpool:
                y = maxpool_forward(x, l.pool_rows, l.pool_cols, trace.argmax[i]);
                break;
            case LayerKind::relu:
                y = relu_forward(x);
                break;
            case LayerKind::dense: {
                const auto& b = block_for(i);
                y = dense_forward(x, b.weight, b.bias);
                break;
            }
            case LayerKind::flatten:
                y = x.reshaped({x.size()});
                break;
            case LayerKind::linear:
                y = x;
                break;
        }
        if (!y.all_finite())
            throw NonFiniteError("non-finite activation after layer " + std::to_string(i) + " (" +
                                 to_string(l.kind) + ")");
        trace.activations.push_back(std::move(x));
        x = std::move(y);
    }
    return x;
}

Tensor Network::backward(const ForwardTrace& trace, const Tensor& upstream, ParameterSet& grads,
                         bool want_input_grad) const {
    if (trace.activations.size() != layers_.size()) throw ShapeError("backward: missing forward context");
    if (upstream.shape() != shapes_.back())
        throw ShapeError("backward: upstream gradient " + shape_string(upstream.shape()) + " does not match output " +
                         shape_string(shapes_.back()));
    if (!grads.same_layout(params_)) throw ShapeError("backward: gradient set layout mismatch");

    Tensor g = upstream;
    for (std::size_t k = layers_.size(); k-- > 0;) {
        const LayerSpec& l = layers_[k];
        const Tensor& in = trace.activations[k];
        // The first layer's input gradient is only needed on request.
        const bool need_input = k > 0 || want_input_grad;
        switch (l.kind) {
            case LayerKind::conv: {
                auto& gb = grads.blocks()[static_cast<std::size_t>(block_index_[k])];
                Tensor gin = need_input ? Tensor(in.shape()) : Tensor();
                conv_backward(in, block_for(k).weight, g, l.stride_rows, l.stride_cols, gb.weight, gb.bias,
                              need_input ? &gin : nullptr);
                g = std::move(gin);
                break;
            }
            case LayerKind::maxpool:
                g = maxpool_backward(in.shape(), trace.argmax[k], g);
                break;
            case LayerKind::relu:
                g = relu_backward(in, g);
                break;
            case LayerKind::dense: {
                auto& gb = grads.blocks()[static_cast<std::size_t>(block_index_[k])];
                Tensor gin = need_input ? Tensor(in.shape()) : Tensor();
                dense_backward(in, block_for(k).weight, g, gb.weight, gb.bias, need_input ? &gin : nullptr);
                g = std::move(gin);
                break;
            }
            case LayerKind::flatten:
                g = g.reshaped(in.shape());
                break;
            case LayerKind::linear:
                break;
        }
    }
    return want_input_grad ? g : Tensor();
}

}  // namespace crl::numerics
