/*
 * Copyright (C) 2026 The qnn Authors. All rights reserved.
 *
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the License); you may
 * not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an AS IS BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnn/types.hpp"

namespace qnn {

/// Height x width x channels. Data in HWC order: channel stride 1, width
/// stride C, height stride W*C.
struct Shape {
    int height = 0;
    int width = 0;
    int channels = 0;

    std::size_t size() const noexcept
    {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
               static_cast<std::size_t>(channels);
    }
    bool valid() const noexcept { return height > 0 && width > 0 && channels > 0; }
    std::size_t offset(int y, int x, int c) const noexcept
    {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    std::string str() const
    {
        return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
    }
    bool operator==(const Shape&) const = default;
};

/// HWC activation/weight buffer with a fixed-point format.
template <class T>
class Tensor {
public:
    using value_type = T;

    Tensor() = default;
    Tensor(Shape shape, int frac_bits) : shape_(shape), frac_bits_(frac_bits), data_(shape.size()) {}
    Tensor(Shape shape, int frac_bits, std::vector<T> data)
        : shape_(shape), frac_bits_(frac_bits), data_(std::move(data))
    {
        if (data_.size() != shape_.size()) {
            throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                             shape_.str());
        }
    }

    const Shape& shape() const noexcept { return shape_; }
    int height() const noexcept { return shape_.height; }
    int width() const noexcept { return shape_.width; }
    int channels() const noexcept { return shape_.channels; }
    int frac_bits() const noexcept { return frac_bits_; }
    void set_frac_bits(int f) noexcept { frac_bits_ = f; }

    static constexpr int elem_width() noexcept { return 8 * static_cast<int>(sizeof(T)); }

    T& at(int y, int x, int c) noexcept { return data_[shape_.offset(y, x, c)]; }
    T at(int y, int x, int c) const noexcept { return data_[shape_.offset(y, x, c)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    /// Reinterpret with a new shape of equal or smaller size; the front of the
    /// buffer is kept. Used after in-situ pooling.
    void shrink_to(Shape s)
    {
        if (s.size() > data_.size()) {
            throw ShapeError("shrink_to: " + s.str() + " larger than buffer");
        }
        shape_ = s;
        data_.resize(s.size());
    }

    bool operator==(const Tensor&) const = default;

private:
    Shape shape_{};
    int frac_bits_ = 0;
    std::vector<T> data_;
};

using Q7Tensor = Tensor<q7_t>;
using Q15Tensor = Tensor<q15_t>;

} // namespace qnn
