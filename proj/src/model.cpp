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

#include "qnn/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "qnn/convolution.hpp"

namespace qnn {

namespace {

constexpr std::array<std::pair<LayerKind, const char*>, 8> kKindNames{{
    {LayerKind::Conv, "conv"},
    {LayerKind::DepthwiseConv, "depthwise_conv"},
    {LayerKind::MaxPool, "maxpool"},
    {LayerKind::AvgPool, "avgpool"},
    {LayerKind::FullyConnected, "fully_connected"},
    {LayerKind::Relu, "relu"},
    {LayerKind::Sigmoid, "sigmoid"},
    {LayerKind::Tanh, "tanh"},
}};

std::string where(std::size_t index, const LayerSpec& l)
{
    return "layer " + std::to_string(index) + " (" + (l.name.empty() ? to_string(l.kind) : l.name) + ")";
}

void check_activation_frac(int f, const std::string& what)
{
    if (f < 0 || f > 7) {
        throw ParamError(what + ": activation frac_bits " + std::to_string(f) + " outside [0, 7]");
    }
}

void check_layer(std::size_t index, const LayerSpec& l)
{
    const std::string at = where(index, l);
    if (!l.in_shape.valid()) {
        throw ShapeError(at + ": invalid input shape " + l.in_shape.str());
    }
    check_activation_frac(l.in_frac_bits, at);
    check_activation_frac(l.out_frac_bits, at);

    Shape expected;
    try {
        expected = l.computed_out_shape();
    } catch (const ParamError& e) {
        throw ParamError(at + ": " + e.what());
    }
    if (expected != l.out_shape) {
        throw ShapeError(at + ": declared output " + l.out_shape.str() + ", geometry gives " + expected.str());
    }

    if (has_weights(l.kind)) {
        if (l.weights.size() != l.expected_weight_count() || l.bias.size() != l.expected_bias_count()) {
            throw ShapeError(at + ": expected " + std::to_string(l.expected_weight_count()) + " weights and " +
                             std::to_string(l.expected_bias_count()) + " biases, got " +
                             std::to_string(l.weights.size()) + " and " + std::to_string(l.bias.size()));
        }
        l.quant.validate();
        if (l.weight_frac_bits < 0 || l.weight_frac_bits > 31 || l.bias_frac_bits < 0 || l.bias_frac_bits > 31) {
            throw ParamError(at + ": weight/bias frac_bits outside [0, 31]");
        }
        if (!l.quant.consistent(l.in_frac_bits, l.weight_frac_bits, l.bias_frac_bits, l.out_frac_bits)) {
            throw ParamError(at + ": formats do not line up: in " + std::to_string(l.in_frac_bits) + " + weight " +
                             std::to_string(l.weight_frac_bits) + " != bias " + std::to_string(l.bias_frac_bits) +
                             " + " + std::to_string(l.quant.bias_left_shift) + " or out " +
                             std::to_string(l.out_frac_bits) + " + " + std::to_string(l.quant.out_right_shift));
        }
        if (l.reordered && l.kind != LayerKind::FullyConnected) {
            throw ParamError(at + ": only fully connected layers can be reordered");
        }
    } else if (!l.weights.empty() || !l.bias.empty()) {
        throw ShapeError(at + ": " + to_string(l.kind) + " layers carry no weights");
    }

    if (is_lut(l.kind)) {
        try {
            build_lut(LutFunc::Sigmoid, l.lut.mode, l.lut.range_pow, l.lut.entries, 8);
        } catch (const ParamError& e) {
            throw ParamError(at + ": " + e.what());
        }
        if (l.out_frac_bits != 7) {
            throw ParamError(at + ": table output is q0.7, out_frac_bits must be 7");
        }
    } else if (!has_weights(l.kind) && l.out_frac_bits != l.in_frac_bits) {
        throw ParamError(at + ": " + to_string(l.kind) + " must keep the input format");
    }
}

// Output shift that brings a dot product of `fan_in` uniform q7 terms to a
// standard deviation of a few dozen.
int auto_out_shift(std::size_t fan_in)
{
    const double sd = std::sqrt(static_cast<double>(fan_in)) * 74.0 * 74.0;
    return std::clamp(static_cast<int>(std::lround(std::log2(sd / 40.0))), 0, 20);
}

void set_formats(LayerSpec& l, int bias_left_shift)
{
    std::size_t fan_in = 0;
    switch (l.kind) {
    case LayerKind::Conv:
        fan_in = static_cast<std::size_t>(l.kernel) * l.kernel * l.in_shape.channels;
        break;
    case LayerKind::DepthwiseConv:
        fan_in = static_cast<std::size_t>(l.kernel) * l.kernel;
        break;
    default:
        fan_in = l.in_shape.size();
    }
    l.quant.out_right_shift = auto_out_shift(fan_in);
    l.weight_frac_bits = l.quant.out_right_shift + l.out_frac_bits - l.in_frac_bits;
    bias_left_shift = std::min(bias_left_shift, l.in_frac_bits + l.weight_frac_bits);
    l.quant.bias_left_shift = bias_left_shift;
    l.bias_frac_bits = l.in_frac_bits + l.weight_frac_bits - bias_left_shift;
}

LayerSpec make_conv(const std::string& name, const Shape& in, int frac, int k, int s, int p, int cout)
{
    LayerSpec l;
    l.name = name;
    l.kind = LayerKind::Conv;
    l.kernel = k;
    l.stride = s;
    l.pad = p;
    l.in_shape = in;
    l.in_frac_bits = frac;
    l.out_frac_bits = frac;
    l.out_shape = conv_output_shape(in, k, s, p, cout);
    l.weights.assign(l.expected_weight_count(), 0);
    l.bias.assign(l.expected_bias_count(), 0);
    set_formats(l, 6);
    return l;
}

LayerSpec make_simple(const std::string& name, LayerKind kind, const Shape& in, int frac)
{
    LayerSpec l;
    l.name = name;
    l.kind = kind;
    l.in_shape = in;
    l.out_shape = in;
    l.in_frac_bits = frac;
    l.out_frac_bits = is_lut(kind) ? 7 : frac;
    return l;
}

LayerSpec make_pool(const std::string& name, LayerKind kind, const Shape& in, int frac, int k, int s, int p)
{
    LayerSpec l = make_simple(name, kind, in, frac);
    l.kernel = k;
    l.stride = s;
    l.pad = p;
    l.out_shape = l.pool_params().output_shape(in);
    return l;
}

LayerSpec make_fc(const std::string& name, const Shape& in, int frac, int outputs)
{
    LayerSpec l = make_simple(name, LayerKind::FullyConnected, in, frac);
    l.out_shape = Shape{1, 1, outputs};
    l.weights.assign(l.expected_weight_count(), 0);
    l.bias.assign(l.expected_bias_count(), 0);
    set_formats(l, 6);
    return l;
}

int pick(std::mt19937& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace

std::string to_string(LayerKind k)
{
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) {
            return name;
        }
    }
    return "unknown";
}

LayerKind parse_layer_kind(const std::string& s)
{
    for (const auto& [kind, name] : kKindNames) {
        if (s == name) {
            return kind;
        }
    }
    throw UnsupportedLayerError("unsupported layer kind '" + s + "'");
}

bool has_weights(LayerKind k) noexcept
{
    return k == LayerKind::Conv || k == LayerKind::DepthwiseConv || k == LayerKind::FullyConnected;
}

bool is_pool(LayerKind k) noexcept
{
    return k == LayerKind::MaxPool || k == LayerKind::AvgPool;
}

bool is_lut(LayerKind k) noexcept
{
    return k == LayerKind::Sigmoid || k == LayerKind::Tanh;
}

std::size_t LayerSpec::expected_weight_count() const noexcept
{
    const auto k2 = static_cast<std::size_t>(kernel) * static_cast<std::size_t>(kernel);
    switch (kind) {
    case LayerKind::Conv:
        return static_cast<std::size_t>(out_shape.channels) * k2 * static_cast<std::size_t>(in_shape.channels);
    case LayerKind::DepthwiseConv:
        return k2 * static_cast<std::size_t>(in_shape.channels);
    case LayerKind::FullyConnected:
        return static_cast<std::size_t>(out_shape.channels) * in_shape.size();
    default:
        return 0;
    }
}

std::size_t LayerSpec::expected_bias_count() const noexcept
{
    return has_weights(kind) ? static_cast<std::size_t>(out_shape.channels) : 0;
}

Shape LayerSpec::computed_out_shape() const
{
    switch (kind) {
    case LayerKind::Conv:
    case LayerKind::DepthwiseConv: {
        if (kernel < 1 || stride < 1 || pad < 0) {
            throw ParamError("kernel and stride must be >= 1 and pad >= 0");
        }
        const int cout = kind == LayerKind::Conv ? out_shape.channels : in_shape.channels;
        if (cout < 1) {
            throw ParamError("convolution needs at least one output channel");
        }
        return conv_output_shape(in_shape, kernel, stride, pad, cout);
    }
    case LayerKind::MaxPool:
    case LayerKind::AvgPool:
        return pool_params().output_shape(in_shape);
    case LayerKind::FullyConnected:
        if (out_shape.channels < 1) {
            throw ParamError("fully connected layer needs at least one output");
        }
        return Shape{1, 1, out_shape.channels};
    default:
        return in_shape;
    }
}

void Model::validate() const
{
    if (!input_shape.valid()) {
        throw ShapeError("model input shape " + input_shape.str() + " is invalid");
    }
    check_activation_frac(input_frac_bits, "model input");
    Shape shape = input_shape;
    int frac = input_frac_bits;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        if (l.in_shape != shape) {
            throw ShapeError(where(i, l) + ": input " + l.in_shape.str() + " does not follow " + shape.str());
        }
        if (l.in_frac_bits != frac) {
            throw ParamError(where(i, l) + ": input frac_bits " + std::to_string(l.in_frac_bits) +
                             " does not follow " + std::to_string(frac));
        }
        check_layer(i, l);
        shape = l.out_shape;
        frac = l.out_frac_bits;
    }
}

std::size_t Model::weight_bytes() const noexcept
{
    std::size_t n = 0;
    for (const auto& l : layers) {
        n += l.expected_weight_count();
    }
    return n;
}

std::size_t Model::bias_bytes() const noexcept
{
    std::size_t n = 0;
    for (const auto& l : layers) {
        n += l.expected_bias_count();
    }
    return n;
}

std::int64_t count_ops(const LayerSpec& l) noexcept
{
    const std::int64_t k2 = std::int64_t{l.kernel} * l.kernel;
    const auto out_px = static_cast<std::int64_t>(l.out_shape.height) * l.out_shape.width;
    switch (l.kind) {
    case LayerKind::Conv:
        return 2 * k2 * l.in_shape.channels * out_px * l.out_shape.channels;
    case LayerKind::DepthwiseConv:
        return 2 * k2 * out_px * l.out_shape.channels;
    case LayerKind::FullyConnected:
        return 2 * static_cast<std::int64_t>(l.in_shape.size()) * l.out_shape.channels;
    case LayerKind::MaxPool:
    case LayerKind::AvgPool:
        return out_px * l.out_shape.channels * k2;
    default:
        return static_cast<std::int64_t>(l.in_shape.size());
    }
}

OpCount count_ops(const Model& m) noexcept
{
    OpCount c;
    for (const auto& l : m.layers) {
        c.per_layer.push_back(count_ops(l));
        c.total += c.per_layer.back();
    }
    return c;
}

Model cifar10_model(bool relu)
{
    Model m;
    m.name = relu ? "cifar10-relu" : "cifar10";
    m.input_shape = Shape{32, 32, 3};
    m.input_frac_bits = 7;
    const int frac = m.input_frac_bits;
    const std::array<int, 3> filters{32, 32, 64};
    Shape shape = m.input_shape;
    for (std::size_t i = 0; i < filters.size(); ++i) {
        const std::string n = std::to_string(i + 1);
        m.layers.push_back(make_conv("conv" + n, shape, frac, 5, 1, 2, filters[i]));
        shape = m.layers.back().out_shape;
        if (relu) {
            m.layers.push_back(make_simple("relu" + n, LayerKind::Relu, shape, frac));
        }
        m.layers.push_back(make_pool("pool" + n, LayerKind::MaxPool, shape, frac, 3, 2, 1));
        shape = m.layers.back().out_shape;
    }
    m.layers.push_back(make_fc("fc1", shape, frac, 10));
    m.validate();
    return m;
}

void randomize_weights(Model& m, std::mt19937& rng)
{
    std::uniform_int_distribution<int> dist(-128, 127);
    for (auto& l : m.layers) {
        for (auto& w : l.weights) {
            w = static_cast<q7_t>(dist(rng));
        }
        for (auto& b : l.bias) {
            b = static_cast<q7_t>(dist(rng));
        }
    }
}

Model random_small_model(std::mt19937& rng, int max_layers, int max_dim)
{
    static constexpr std::array<int, 3> kernels{1, 3, 5};
    Model m;
    m.name = "random";
    m.input_shape = Shape{pick(rng, 1, max_dim), pick(rng, 1, max_dim), pick(rng, 1, max_dim)};
    m.input_frac_bits = pick(rng, 0, 7);
    Shape shape = m.input_shape;
    int frac = m.input_frac_bits;
    const int n_layers = pick(rng, 1, max_layers);

    for (int i = 0; i < n_layers; ++i) {
        const std::string name = "l" + std::to_string(i);
        auto kind = static_cast<LayerKind>(pick(rng, 0, 7));
        LayerSpec l;
        bool made = false;
        for (int attempt = 0; attempt < 20 && !made; ++attempt) {
            const int k = kernels[static_cast<std::size_t>(pick(rng, 0, 2))];
            const int s = pick(rng, 1, 2);
            const int p = pick(rng, 0, 2);
            try {
                switch (kind) {
                case LayerKind::Conv:
                    l = make_conv(name, shape, frac, k, s, p, pick(rng, 1, max_dim));
                    set_formats(l, pick(rng, 0, 8));
                    break;
                case LayerKind::DepthwiseConv:
                    l = make_conv(name, shape, frac, k, s, p, shape.channels);
                    l.kind = LayerKind::DepthwiseConv;
                    l.weights.assign(l.expected_weight_count(), 0);
                    set_formats(l, pick(rng, 0, 8));
                    break;
                case LayerKind::MaxPool:
                case LayerKind::AvgPool:
                    l = make_pool(name, kind, shape, frac, k, s, std::min(p, s - 1));
                    break;
                case LayerKind::FullyConnected:
                    l = make_fc(name, shape, frac, pick(rng, 1, max_dim));
                    l.reordered = pick(rng, 0, 1) == 1;
                    break;
                case LayerKind::Sigmoid:
                case LayerKind::Tanh:
                    l = make_simple(name, kind, shape, frac);
                    l.lut.range_pow = pick(rng, 2, 3);
                    l.lut.entries = 1 << pick(rng, 3, 9);
                    l.lut.mode = pick(rng, 0, 1) == 1 ? LutMode::TwoRegion : LutMode::Unified;
                    l.lut.interpolate = pick(rng, 0, 1) == 1;
                    break;
                case LayerKind::Relu:
                    l = make_simple(name, kind, shape, frac);
                    break;
                }
                made = true;
            } catch (const ParamError&) {
                // geometry does not fit this shape; draw again
            }
        }
        if (!made) {
            l = make_simple(name, LayerKind::Relu, shape, frac);
        }
        m.layers.push_back(std::move(l));
        shape = m.layers.back().out_shape;
        frac = m.layers.back().out_frac_bits;
    }
    randomize_weights(m, rng);
    m.validate();
    return m;
}

Q7Tensor random_input(const Model& m, std::mt19937& rng)
{
    Q7Tensor t(m.input_shape, m.input_frac_bits);
    std::uniform_int_distribution<int> dist(-128, 127);
    for (auto& v : t.storage()) {
        v = static_cast<q7_t>(dist(rng));
    }
    return t;
}

} // namespace qnn
