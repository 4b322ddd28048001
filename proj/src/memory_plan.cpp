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

#include "qnn/memory_plan.hpp"

#include <algorithm>

#include "qnn/convolution.hpp"
#include "qnn/fully_connected.hpp"

namespace qnn {

namespace {

bool works_in_place(LayerKind k) noexcept
{
    return is_pool(k) || is_lut(k) || k == LayerKind::Relu;
}

ConvParams conv_params(const LayerSpec& l, int cols)
{
    ConvParams p;
    p.kernel = l.kernel;
    p.stride = l.stride;
    p.pad = l.pad;
    p.quant = l.quant;
    p.partial_cols = cols;
    return p;
}

} // namespace

int conv_columns(const LayerSpec& l, const PlanOptions& opt) noexcept
{
    if (!opt.full_im2col) {
        return opt.partial_cols;
    }
    const int patches = l.out_shape.height * l.out_shape.width;
    return std::max(2, patches + (patches & 1));
}

std::size_t layer_scratch_bytes(const LayerSpec& l, const PlanOptions& opt)
{
    switch (l.kind) {
    case LayerKind::Conv:
        return conv_scratch_size(l.in_shape, conv_params(l, conv_columns(l, opt))) * sizeof(q15_t);
    case LayerKind::DepthwiseConv:
        return depthwise_scratch_size(l.in_shape, conv_params(l, 2)) * sizeof(q15_t);
    case LayerKind::FullyConnected:
        return fc_scratch_size(static_cast<int>(l.in_shape.size())) * sizeof(q15_t);
    case LayerKind::AvgPool:
        return avgpool_scratch_size(l.in_shape, l.pool_params()) * sizeof(std::int32_t);
    default:
        return 0;
    }
}

MemoryPlan plan_memory(const Model& m, const PlanOptions& opt)
{
    m.validate();
    if (!opt.full_im2col && (opt.partial_cols < 2 || opt.partial_cols % 2 != 0)) {
        throw ParamError("plan_memory: partial_cols must be even and >= 2");
    }
    MemoryPlan plan;
    plan.options = opt;
    plan.weight_bytes = m.weight_bytes();
    plan.bias_bytes = m.bias_bytes();

    int cur = 0;
    plan.activation_buffers[0] = m.input_shape.size();
    for (const auto& l : m.layers) {
        LayerMemory lm;
        lm.name = l.name;
        lm.kind = l.kind;
        lm.in_bytes = l.in_shape.size();
        lm.out_bytes = l.out_shape.size();
        lm.scratch_bytes = layer_scratch_bytes(l, opt);
        lm.in_place = works_in_place(l.kind);
        lm.in_buffer = cur;
        lm.out_buffer = lm.in_place ? cur : 1 - cur;
        lm.ops = count_ops(l);
        cur = lm.out_buffer;

        auto& buf = plan.activation_buffers[static_cast<std::size_t>(cur)];
        buf = std::max(buf, lm.out_bytes);
        plan.scratch_bytes = std::max(plan.scratch_bytes, lm.scratch_bytes);
        plan.activation_sum += lm.out_bytes;
        plan.largest_pair = std::max(plan.largest_pair, lm.in_place ? lm.in_bytes : lm.in_bytes + lm.out_bytes);
        if (is_lut(l.kind)) {
            plan.table_bytes += static_cast<std::size_t>(l.lut.entries);
        }
        plan.layers.push_back(std::move(lm));
    }
    plan.peak_bytes =
        plan.activation_bytes() + plan.scratch_bytes + plan.weight_bytes + plan.bias_bytes + plan.table_bytes;
    return plan;
}

} // namespace qnn
