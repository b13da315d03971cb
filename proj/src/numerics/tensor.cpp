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

#include "crl/numerics/tensor.hpp"

#include <cmath>
#include <numeric>

namespace crl::numerics {

std::size_t shape_size(const Shape& shape) {
    if (shape.empty()) return 0;
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    for (auto d : shape_)
        if (d == 0) throw ShapeError("tensor extents must be positive: " + shape_string(shape_));
    data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    for (auto d : shape_)
        if (d == 0) throw ShapeError("tensor extents must be positive: " + shape_string(shape_));
    if (shape_size(shape_) != data_.size())
        throw ShapeError("shape " + shape_string(shape_) + " does not match " +
                         std::to_string(data_.size()) + " values");
}

Tensor Tensor::reshaped(Shape shape) const {
    return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void require_finite(const Tensor& t, const char* where) {
    if (!t.all_finite()) throw NonFiniteError(std::string("non-finite value in ") + where);
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ShapeError("dot: length mismatch " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace crl::numerics
