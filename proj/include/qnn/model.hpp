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

// Declarative network description and op counting.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qnn/activation.hpp"
#include "qnn/pooling.hpp"
#include "qnn/quant.hpp"
#include "qnn/tensor.hpp"
#include "qnn/types.hpp"

namespace qnn {

enum class LayerKind : std::uint8_t {
    Conv,
    DepthwiseConv,
    MaxPool,
    AvgPool,
    FullyConnected,
    Relu,
    Sigmoid,
    Tanh,
};

std::string to_string(LayerKind k);
/// Throws UnsupportedLayerError for anything not in LayerKind.
LayerKind parse_layer_kind(const std::string& s);

bool has_weights(LayerKind k) noexcept;
bool is_pool(LayerKind k) noexcept;
bool is_lut(LayerKind k) noexcept;

/// Table parameters for sigmoid / tanh layers. Tables always hold q0.7.
struct LutSpec {
    int range_pow = 3;
    int entries = 256;
    LutMode mode = LutMode::Unified;
    bool interpolate = false;

    bool operator==(const LutSpec&) const = default;
};

struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Relu;
    /// Square window for conv, depthwise and pooling layers.
    int kernel = 1;
    int stride = 1;
    int pad = 0;
    Shape in_shape{};
    Shape out_shape{};
    int in_frac_bits = 7;
    int out_frac_bits = 7;
    /// Weight-bearing layers only.
    int weight_frac_bits = 7;
    int bias_frac_bits = 7;
    QuantParams quant{};
    /// Natural order: conv [C_out][K][K][C_in], depthwise [K][K][C],
    /// fully connected [rows][cols] with cols = in_shape.size().
    std::vector<q7_t> weights;
    std::vector<q7_t> bias;
    /// Fully connected only: run the 1x4 kernel and store the blob interleaved.
    bool reordered = false;
    LutSpec lut{};

    std::size_t expected_weight_count() const noexcept;
    std::size_t expected_bias_count() const noexcept;
    /// Output shape from the input shape and geometry (throws on bad geometry).
    Shape computed_out_shape() const;
    PoolParams pool_params() const noexcept { return PoolParams::square(kernel, stride, pad); }

    bool operator==(const LayerSpec&) const = default;
};

struct Model {
    std::string name;
    Shape input_shape{};
    int input_frac_bits = 7;
    std::vector<LayerSpec> layers;

    Shape output_shape() const noexcept { return layers.empty() ? input_shape : layers.back().out_shape; }
    int output_frac_bits() const noexcept { return layers.empty() ? input_frac_bits : layers.back().out_frac_bits; }

    /// Checks shape chaining, declared shapes against the shape law, blob
    /// sizes, shift ranges and fixed-point format consistency. Throws
    /// ShapeError, ParamError or ManifestError.
    void validate() const;

    /// Sum of filter bytes (weights only).
    std::size_t weight_bytes() const noexcept;
    std::size_t bias_bytes() const noexcept;

    bool operator==(const Model&) const = default;
};

/// conv / fully connected: 2 * K^2 * C_in * H_out * W_out * C_out.
/// depthwise: 2 * K^2 * H_out * W_out * C.  pooling: H_out * W_out * C * K^2.
/// element-wise layers: H * W * C.
std::int64_t count_ops(const LayerSpec& l) noexcept;

struct OpCount {
    std::vector<std::int64_t> per_layer;
    std::int64_t total = 0;
};
OpCount count_ops(const Model& m) noexcept;

/// The CIFAR-10 network: three 5x5 conv layers (32, 32, 64 filters, pad 2),
/// each followed by 3x3 stride-2 max pooling, then a 1024 -> 10 fully
/// connected layer. With `relu`, a ReLU follows every convolution. Weights are
/// zero; shifts and formats are set for weights drawn by randomize_weights.
Model cifar10_model(bool relu = false);

/// Fills every weight and bias with uniform q7 values.
void randomize_weights(Model& m, std::mt19937& rng);

/// A random valid model of 1..max_layers layers with every spatial size and
/// channel count <= max_dim, weights included.
Model random_small_model(std::mt19937& rng, int max_layers = 4, int max_dim = 12);

/// Uniform random q7 tensor of the model's input shape and format.
Q7Tensor random_input(const Model& m, std::mt19937& rng);

} // namespace qnn
