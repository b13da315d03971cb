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
#include <string>
#include <vector>

#include "crl/numerics/tensor.hpp"

namespace crl::numerics {

enum class LayerKind { conv, maxpool, relu, dense, flatten, linear };

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

// One entry of a feed-forward layer list. Images are (rows, cols, channels).
struct LayerSpec {
    LayerKind kind = LayerKind::linear;
    std::size_t filters = 0;
    std::size_t kernel_rows = 0;
    std::size_t kernel_cols = 0;
    std::size_t stride_rows = 1;
    std::size_t stride_cols = 1;
    std::size_t pool_rows = 1;
    std::size_t pool_cols = 1;
    std::size_t units = 0;

    static LayerSpec conv(std::size_t filters, std::size_t kernel_rows, std::size_t kernel_cols,
                          std::size_t stride_rows = 1, std::size_t stride_cols = 1);
    static LayerSpec maxpool(std::size_t pool_rows, std::size_t pool_cols);
    static LayerSpec relu() { return {.kind = LayerKind::relu}; }
    static LayerSpec dense(std::size_t units);
    static LayerSpec flatten() { return {.kind = LayerKind::flatten}; }
    static LayerSpec linear() { return {.kind = LayerKind::linear}; }

    bool has_parameters() const { return kind == LayerKind::conv || kind == LayerKind::dense; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Input (5, 100, 3): five camera rows, 100 columns, three stacked frames.
Shape default_input_shape();

// conv(4, 3x5) -> maxpool(1,2) -> relu -> conv(8, 3x5) -> relu -> flatten(352)
// -> dense(100) -> relu -> dense(100) -> relu -> dense(9) -> linear.
// Valid convolutions; only the first convolution is pooled, which gives the
// 352-wide flatten that the dense parameter counts 35,300 / 10,100 / 909 need.
std::vector<LayerSpec> default_architecture();

// Throws ShapeError when the layer cannot consume `in`.
Shape output_shape(const LayerSpec& layer, const Shape& in);

// Weight/bias shapes of a parametric layer given its input shape.
// conv: weight (kernel_rows, kernel_cols, in_channels, filters), bias (filters)
// dense: weight (units, inputs), bias (units)
Shape weight_shape(const LayerSpec& layer, const Shape& in);
Shape bias_shape(const LayerSpec& layer, const Shape& in);

// Kernels. Backward functions accumulate into their gradient outputs.

Tensor conv_forward(const Tensor& in, const Tensor& weight, const Tensor& bias,
                    std::size_t stride_rows, std::size_t stride_cols);
void conv_backward(const Tensor& in, const Tensor& weight, const Tensor& upstream,
                   std::size_t stride_rows, std::size_t stride_cols,
                   Tensor& weight_grad, Tensor& bias_grad, Tensor* input_grad);

// `argmax` receives, per output element, the flat input index of the winner.
// Ties resolve to the first element in row-major order.
Tensor maxpool_forward(const Tensor& in, std::size_t pool_rows, std::size_t pool_cols,
                       std::vector<std::size_t>& argmax);
Tensor maxpool_backward(const Shape& in_shape, const std::vector<std::size_t>& argmax,
                        const Tensor& upstream);

Tensor relu_forward(const Tensor& in);
Tensor relu_backward(const Tensor& in, const Tensor& upstream);

Tensor dense_forward(const Tensor& in, const Tensor& weight, const Tensor& bias);
void dense_backward(const Tensor& in, const Tensor& weight, const Tensor& upstream,
                    Tensor& weight_grad, Tensor& bias_grad, Tensor* input_grad);

}  // namespace crl::numerics
