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

#include "crl/numerics/layers.hpp"

#include <algorithm>

namespace crl::numerics {

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::conv: return "conv";
        case LayerKind::maxpool: return "maxpool";
        case LayerKind::relu: return "relu";
        case LayerKind::dense: return "dense";
        case LayerKind::flatten: return "flatten";
        case LayerKind::linear: return "linear";
    }
    return "?";
}

LayerKind layer_kind_from_string(const std::string& name) {
    for (auto k : {LayerKind::conv, LayerKind::maxpool, LayerKind::relu, LayerKind::dense,
                   LayerKind::flatten, LayerKind::linear})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown layer kind '" + name + "'");
}

LayerSpec LayerSpec::conv(std::size_t filters, std::size_t kernel_rows, std::size_t kernel_cols,
                          std::size_t stride_rows, std::size_t stride_cols) {
    LayerSpec s{.kind = LayerKind::conv};
    s.filters = filters;
    s.kernel_rows = kernel_rows;
    s.kernel_cols = kernel_cols;
    s.stride_rows = stride_rows;
    s.stride_cols = stride_cols;
    return s;
}

LayerSpec LayerSpec::maxpool(std::size_t pool_rows, std::size_t pool_cols) {
    LayerSpec s{.kind = LayerKind::maxpool};
    s.pool_rows = pool_rows;
    s.pool_cols = pool_cols;
    return s;
}

LayerSpec LayerSpec::dense(std::size_t units) {
    LayerSpec s{.kind = LayerKind::dense};
    s.units = units;
    return s;
}

Shape default_input_shape() { return {5, 100, 3}; }

std::vector<LayerSpec> default_architecture() {
    return {
        LayerSpec::conv(4, 3, 5),
        LayerSpec::maxpool(1, 2),
        LayerSpec::relu(),
        LayerSpec::conv(8, 3, 5),
        LayerSpec::relu(),
        LayerSpec::flatten(),
        LayerSpec::dense(100),
        LayerSpec::relu(),
        LayerSpec::dense(100),
        LayerSpec::relu(),
        LayerSpec::dense(9),
        LayerSpec::linear(),
    };
}

namespace {

void require_image(const LayerSpec& layer, const Shape& in) {
    if (in.size() != 3)
        throw ShapeError(to_string(layer.kind) + " expects (rows, cols, channels) input, got " +
                         shape_string(in));
}

}  // namespace

Shape output_shape(const LayerSpec& layer, const Shape& in) {
    switch (layer.kind) {
        case LayerKind::conv: {
            require_image(layer, in);
            if (layer.filters == 0 || layer.kernel_rows == 0 || layer.kernel_cols == 0 ||
                layer.stride_rows == 0 || layer.stride_cols == 0)
                throw ShapeError("conv: filters, kernel and stride must be positive");
            if (in[0] < layer.kernel_rows || in[1] < layer.kernel_cols)
                throw ShapeError("conv: kernel larger than input " + shape_string(in));
            return {(in[0] - layer.kernel_rows) / layer.stride_rows + 1,
                    (in[1] - layer.kernel_cols) / layer.stride_cols + 1, layer.filters};
        }
        case LayerKind::maxpool: {
            require_image(layer, in);
            if (layer.pool_rows == 0 || layer.pool_cols == 0)
                throw ShapeError("maxpool: pool extents must be positive");
            if (in[0] < layer.pool_rows || in[1] < layer.pool_cols)
                throw ShapeError("maxpool: pool larger than input " + shape_string(in));
            return {in[0] / layer.pool_rows, in[1] / layer.pool_cols, in[2]};
        }
        case LayerKind::relu:
        case LayerKind::linear:
            return in;
        case LayerKind::flatten:
            return {shape_size(in)};
        case LayerKind::dense:
            if (in.size() != 1) throw ShapeError("dense expects a vector input, got " + shape_string(in));
            if (layer.units == 0) throw ShapeError("dense: units must be positive");
            return {layer.units};
    }
    throw ShapeError("unknown layer kind");
}

Shape weight_shape(const LayerSpec& layer, const Shape& in) {
    output_shape(layer, in);
    if (layer.kind == LayerKind::conv) return {layer.kernel_rows, layer.kernel_cols, in[2], layer.filters};
    if (layer.kind == LayerKind::dense) return {layer.units, in[0]};
    throw ShapeError(to_string(layer.kind) + " has no parameters");
}

Shape bias_shape(const LayerSpec& layer, const Shape& in) {
    output_shape(layer, in);
    if (layer.kind == LayerKind::conv) return {layer.filters};
    if (layer.kind == LayerKind::dense) return {layer.units};
    throw ShapeError(to_string(layer.kind) + " has no parameters");
}

Tensor conv_forward(const Tensor& in, const Tensor& weight, const Tensor& bias,
                    std::size_t stride_rows, std::size_t stride_cols) {
    if (in.rank() != 3 || weight.rank() != 4 || weight.dim(2) != in.dim(2) || bias.size() != weight.dim(3))
        throw ShapeError("conv_forward: incompatible input " + shape_string(in.shape()) + " / weight " +
                         shape_string(weight.shape()));
    const std::size_t cols = in.dim(1), channels = in.dim(2);
    const std::size_t kr = weight.dim(0), kc = weight.dim(1), filters = weight.dim(3);
    const LayerSpec spec = LayerSpec::conv(filters, kr, kc, stride_rows, stride_cols);
    Tensor out(output_shape(spec, in.shape()));
    const std::size_t out_rows = out.dim(0), out_cols = out.dim(1);

    const double* x = in.data();
    const double* w = weight.data();
    double* y = out.data();
    for (std::size_t oy = 0; oy < out_rows; ++oy) {
        for (std::size_t ox = 0; ox < out_cols; ++ox) {
            double* yo = y + (oy * out_cols + ox) * filters;
            for (std::size_t f = 0; f < filters; ++f) yo[f] = bias[f];
            for (std::size_t ky = 0; ky < kr; ++ky) {
                for (std::size_t kx = 0; kx < kc; ++kx) {
                    const double* xi = x + ((oy * stride_rows + ky) * cols + ox * stride_cols + kx) * channels;
                    const double* wk = w + (ky * kc + kx) * channels * filters;
                    for (std::size_t c = 0; c < channels; ++c) {
                        const double v = xi[c];
                        const double* wc = wk + c * filters;
                        for (std::size_t f = 0; f < filters; ++f) yo[f] += v * wc[f];
                    }
                }
            }
        }
    }
    return out;
}

void conv_backward(const Tensor& in, const Tensor& weight, const Tensor& upstream,
                   std::size_t stride_rows, std::size_t stride_cols,
                   Tensor& weight_grad, Tensor& bias_grad, Tensor* input_grad) {
    const std::size_t cols = in.dim(1), channels = in.dim(2);
    const std::size_t kr = weight.dim(0), kc = weight.dim(1), filters = weight.dim(3);
    if (upstream.rank() != 3 || upstream.dim(2) != filters || weight_grad.shape() != weight.shape() ||
        bias_grad.size() != filters)
        throw ShapeError("conv_backward: gradient shapes do not match the layer");
    if (input_grad && input_grad->shape() != in.shape())
        throw ShapeError("conv_backward: input gradient shape mismatch");
    const std::size_t out_rows = upstream.dim(0), out_cols = upstream.dim(1);

    const double* x = in.data();
    const double* w = weight.data();
    const double* g = upstream.data();
    double* gw = weight_grad.data();
    double* gb = bias_grad.data();
    double* gx = input_grad ? input_grad->data() : nullptr;
    for (std::size_t oy = 0; oy < out_rows; ++oy) {
        for (std::size_t ox = 0; ox < out_cols; ++ox) {
            const double* go = g + (oy * out_cols + ox) * filters;
            for (std::size_t f = 0; f < filters; ++f) gb[f] += go[f];
            for (std::size_t ky = 0; ky < kr; ++ky) {
                for (std::size_t kx = 0; kx < kc; ++kx) {
                    const std::size_t xoff = ((oy * stride_rows + ky) * cols + ox * stride_cols + kx) * channels;
                    const std::size_t woff = (ky * kc + kx) * channels * filters;
                    for (std::size_t c = 0; c < channels; ++c) {
                        const double v = x[xoff + c];
                        double* gwc = gw + woff + c * filters;
                        for (std::size_t f = 0; f < filters; ++f) gwc[f] += v * go[f];
                        if (gx) {
                            const double* wc = w + woff + c * filters;
                            double acc = 0.0;
                            for (std::size_t f = 0; f < filters; ++f) acc += wc[f] * go[f];
                            gx[xoff + c] += acc;
                        }
                    }
                }
            }
        }
    }
}

Tensor maxpool_forward(const Tensor& in, std::size_t pool_rows, std::size_t pool_cols,
                       std::vector<std::size_t>& argmax) {
    Tensor out(output_shape(LayerSpec::maxpool(pool_rows, pool_cols), in.shape()));
    const std::size_t cols = in.dim(1), channels = in.dim(2);
    const std::size_t out_rows = out.dim(0), out_cols = out.dim(1);
    argmax.assign(out.size(), 0);
    for (std::size_t oy = 0; oy < out_rows; ++oy)
        for (std::size_t ox = 0; ox < out_cols; ++ox)
            for (std::size_t c = 0; c < channels; ++c) {
                std::size_t best = ((oy * pool_rows) * cols + ox * pool_cols) * channels + c;
                for (std::size_t py = 0; py < pool_rows; ++py)
                    for (std::size_t px = 0; px < pool_cols; ++px) {
                        const std::size_t idx = ((oy * pool_rows + py) * cols + ox * pool_cols + px) * channels + c;
                        if (in[idx] > in[best]) best = idx;
                    }
                const std::size_t o = (oy * out_cols + ox) * channels + c;
                out[o] = in[best];
                argmax[o] = best;
            }
    return out;
}

Tensor maxpool_backward(const Shape& in_shape, const std::vector<std::size_t>& argmax,
                        const Tensor& upstream) {
    if (argmax.size() != upstream.size()) throw ShapeError("maxpool_backward: missing forward context");
    Tensor grad(in_shape);
    for (std::size_t o = 0; o < argmax.size(); ++o) grad[argmax[o]] += upstream[o];
    return grad;
}

Tensor relu_forward(const Tensor& in) {
    Tensor out = in;
    for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor relu_backward(const Tensor& in, const Tensor& upstream) {
    if (in.size() != upstream.size()) throw ShapeError("relu_backward: shape mismatch");
    Tensor grad(in.shape());
    for (std::size_t i = 0; i < in.size(); ++i) grad[i] = in[i] > 0.0 ? upstream[i] : 0.0;
    return grad;
}

Tensor dense_forward(const Tensor& in, const Tensor& weight, const Tensor& bias) {
    if (in.rank() != 1 || weight.rank() != 2 || weight.dim(1) != in.size() || bias.size() != weight.dim(0))
        throw ShapeError("dense_forward: incompatible input " + shape_string(in.shape()) + " / weight " +
                         shape_string(weight.shape()));
    const std::size_t n_out = weight.dim(0), n_in = weight.dim(1);
    Tensor out({n_out});
    const double* x = in.data();
    for (std::size_t o = 0; o < n_out; ++o) {
        const double* wr = weight.data() + o * n_in;
        double acc = 0.0;
        for (std::size_t i = 0; i < n_in; ++i) acc += wr[i] * x[i];
        out[o] = acc + bias[o];
    }
    return out;
}

void dense_backward(const Tensor& in, const Tensor& weight, const Tensor& upstream,
                    Tensor& weight_grad, Tensor& bias_grad, Tensor* input_grad) {
    const std::size_t n_out = weight.dim(0), n_in = weight.dim(1);
    if (upstream.size() != n_out || in.size() != n_in || weight_grad.shape() != weight.shape() ||
        bias_grad.size() != n_out)
        throw ShapeError("dense_backward: gradient shapes do not match the layer");
    if (input_grad && input_grad->size() != n_in) throw ShapeError("dense_backward: input gradient shape mismatch");
    const double* x = in.data();
    for (std::size_t o = 0; o < n_out; ++o) {
        const double g = upstream[o];
        bias_grad[o] += g;
        if (g == 0.0) continue;
        double* gwr = weight_grad.data() + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) gwr[i] += g * x[i];
        if (input_grad) {
            const double* wr = weight.data() + o * n_in;
            double* gx = input_grad->data();
            for (std::size_t i = 0; i < n_in; ++i) gx[i] += g * wr[i];
        }
    }
}

}  // namespace crl::numerics
