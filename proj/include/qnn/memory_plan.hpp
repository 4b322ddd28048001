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

// Static memory plan for running a Model with two activation buffers.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qnn/model.hpp"

namespace qnn {

struct PlanOptions {
    /// Columns buffered by conv layers (even, >= 2). Ignored with full_im2col.
    int partial_cols = 2;
    /// Buffer every output pixel's receptive field at once.
    bool full_im2col = false;
};

/// im2col columns a conv layer buffers under `opt`. Full im2col uses every
/// output pixel, rounded up to an even count for the 2x2 kernel.
int conv_columns(const LayerSpec& l, const PlanOptions& opt) noexcept;

/// Bytes of kernel scratch a layer needs under `opt`.
std::size_t layer_scratch_bytes(const LayerSpec& l, const PlanOptions& opt);

struct LayerMemory {
    std::string name;
    LayerKind kind = LayerKind::Relu;
    std::size_t in_bytes = 0;
    std::size_t out_bytes = 0;
    std::size_t scratch_bytes = 0;
    /// Which of the two activation buffers holds the input and output.
    int in_buffer = 0;
    int out_buffer = 0;
    bool in_place = false;
    std::int64_t ops = 0;

    /// Bytes live while this layer runs (in-place layers count their buffer once).
    std::size_t requirement() const noexcept { return (in_place ? in_bytes : in_bytes + out_bytes) + scratch_bytes; }
};

struct MemoryPlan {
    PlanOptions options{};
    std::array<std::size_t, 2> activation_buffers{};
    std::size_t scratch_bytes = 0;
    std::size_t weight_bytes = 0;
    std::size_t bias_bytes = 0;
    /// q7 activation tables built for sigmoid / tanh layers.
    std::size_t table_bytes = 0;
    std::size_t peak_bytes = 0;
    /// Sum of every layer's output size.
    std::size_t activation_sum = 0;
    /// Largest in + out of a single layer (in-place layers count once).
    std::size_t largest_pair = 0;
    std::vector<LayerMemory> layers;

    std::size_t activation_bytes() const noexcept { return activation_buffers[0] + activation_buffers[1]; }
};

/// Buffer assignment: the model input sits in buffer 0; pooling, ReLU and
/// table layers work in place, every other layer writes to the other buffer.
/// Each buffer is as large as the biggest tensor it ever holds. Scratch is
/// shared, sized for the hungriest layer. Peak = activations + scratch +
/// weights + biases + tables.
MemoryPlan plan_memory(const Model& m, const PlanOptions& opt = {});

} // namespace qnn
