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

#include "qnn/runner.hpp"

#include <algorithm>
#include <chrono>

#include "qnn/convolution.hpp"
#include "qnn/pooling.hpp"
#include "qnn/reference.hpp"

namespace qnn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
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

LutFunc lut_func(LayerKind k) noexcept
{
    return k == LayerKind::Sigmoid ? LutFunc::Sigmoid : LutFunc::Tanh;
}

LutTable table_for(const LayerSpec& l)
{
    return build_lut(lut_func(l.kind), l.lut.mode, l.lut.range_pow, l.lut.entries, 8);
}

} // namespace

int RunResult::argmax() const noexcept
{
    const auto d = output.data();
    if (d.empty()) {
        return -1;
    }
    return static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
}

void check_input(const Model& model, const Q7Tensor& input)
{
    if (input.shape() != model.input_shape) {
        throw ShapeError("input shape " + input.shape().str() + " does not match model input " +
                         model.input_shape.str());
    }
    if (input.frac_bits() != model.input_frac_bits) {
        throw ParamError("input frac_bits " + std::to_string(input.frac_bits()) + " does not match model input " +
                         std::to_string(model.input_frac_bits));
    }
}

Runner::Runner(Model model, const PlanOptions& opt) : model_(std::move(model)), plan_(plan_memory(model_, opt))
{
    fc_weights_.resize(model_.layers.size());
    tables_.resize(model_.layers.size());
    for (std::size_t i = 0; i < model_.layers.size(); ++i) {
        const LayerSpec& l = model_.layers[i];
        if (l.kind == LayerKind::FullyConnected && l.reordered) {
            fc_weights_[i] = weight_reorder_1x4(l.weights, l.out_shape.channels, static_cast<int>(l.in_shape.size()));
        } else if (is_lut(l.kind)) {
            tables_[i] = table_for(l);
        }
    }
    buffers_[0].resize(plan_.activation_buffers[0]);
    buffers_[1].resize(plan_.activation_buffers[1]);
    std::size_t q15_entries = 0;
    std::size_t int32_entries = 0;
    for (const auto& lm : plan_.layers) {
        if (lm.kind == LayerKind::AvgPool) {
            int32_entries = std::max(int32_entries, lm.scratch_bytes / sizeof(std::int32_t));
        } else {
            q15_entries = std::max(q15_entries, lm.scratch_bytes / sizeof(q15_t));
        }
    }
    scratch_.resize(q15_entries);
    pool_scratch_.resize(int32_entries);
}

void Runner::run_layer(std::size_t i, int& cur)
{
    const LayerSpec& l = model_.layers[i];
    const LayerMemory& lm = plan_.layers[i];
    std::span<q7_t> in = std::span(buffers_[static_cast<std::size_t>(cur)]).first(lm.in_bytes);
    std::span<q7_t> out = std::span(buffers_[static_cast<std::size_t>(lm.out_buffer)]).first(lm.out_bytes);

    switch (l.kind) {
    case LayerKind::Conv:
        conv_hwc_q7(in, l.in_shape, l.weights, l.bias, conv_params(l, conv_columns(l, plan_.options)), scratch_, out);
        break;
    case LayerKind::DepthwiseConv:
        depthwise_conv_hwc_q7(in, l.in_shape, l.weights, l.bias, conv_params(l, 2), scratch_, out);
        break;
    case LayerKind::MaxPool:
        maxpool_insitu(in, l.in_shape, l.pool_params());
        break;
    case LayerKind::AvgPool:
        avgpool_insitu(in, l.in_shape, l.pool_params(), pool_scratch_);
        break;
    case LayerKind::FullyConnected:
        if (l.reordered) {
            fully_connected_q7_opt(in, fc_weights_[i], l.bias, l.quant, out, scratch_);
        } else {
            fully_connected_q7(in, l.weights, l.bias, l.quant, out, scratch_);
        }
        break;
    case LayerKind::Relu:
        relu_q7(in);
        break;
    case LayerKind::Sigmoid:
    case LayerKind::Tanh:
        apply_lut(std::span<const q7_t>(in), l.in_frac_bits, tables_[i], l.lut.interpolate, in);
        break;
    }
    cur = lm.out_buffer;
}

RunResult Runner::run(const Q7Tensor& input)
{
    check_input(model_, input);
    std::copy(input.data().begin(), input.data().end(), buffers_[0].begin());
    RunResult r;
    int cur = 0;
    for (std::size_t i = 0; i < model_.layers.size(); ++i) {
        const auto t0 = Clock::now();
        run_layer(i, cur);
        r.layers.push_back({model_.layers[i].name, model_.layers[i].kind, plan_.layers[i].ops, seconds_since(t0)});
    }
    const Shape out_shape = model_.output_shape();
    const auto& buf = buffers_[static_cast<std::size_t>(cur)];
    r.output = Q7Tensor(out_shape, model_.output_frac_bits(),
                        std::vector<q7_t>(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(out_shape.size())));
    return r;
}

RunResult run_reference(const Model& model, const Q7Tensor& input)
{
    model.validate();
    check_input(model, input);
    RunResult r;
    Q7Tensor t = input;
    for (const auto& l : model.layers) {
        const auto t0 = Clock::now();
        switch (l.kind) {
        case LayerKind::Conv:
            t = ref::conv(t, l.weights, l.bias, l.kernel, l.stride, l.pad, l.quant, l.out_frac_bits);
            break;
        case LayerKind::DepthwiseConv:
            t = ref::depthwise_conv(t, l.weights, l.bias, l.kernel, l.stride, l.pad, l.quant, l.out_frac_bits);
            break;
        case LayerKind::MaxPool:
        case LayerKind::AvgPool:
            t = ref::pool_window(t, l.pool_params(),
                                 l.kind == LayerKind::MaxPool ? ref::PoolKind::Max : ref::PoolKind::Average);
            break;
        case LayerKind::FullyConnected:
            t = Q7Tensor(l.out_shape, l.out_frac_bits,
                         ref::fully_connected<q7_t, q7_t>(t.data(), l.weights, l.bias, l.quant));
            break;
        case LayerKind::Relu:
            t = Q7Tensor(l.out_shape, l.out_frac_bits, ref::relu(t.data()));
            break;
        case LayerKind::Sigmoid:
        case LayerKind::Tanh:
            t = Q7Tensor(l.out_shape, l.out_frac_bits,
                         ref::lut<q7_t, q7_t>(t.data(), l.in_frac_bits, table_for(l), l.lut.interpolate));
            break;
        }
        r.layers.push_back({l.name, l.kind, count_ops(l), seconds_since(t0)});
    }
    r.output = std::move(t);
    return r;
}

} // namespace qnn
