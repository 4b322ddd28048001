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

#include "qnn/activation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qnn/packed_ops.hpp"
#include "qnn/quant.hpp"

namespace qnn {

void relu_q7(std::span<q7_t> data) noexcept
{
    const std::size_t n4 = data.size() & ~std::size_t{3};
    q7_t* p = data.data();
    for (std::size_t i = 0; i < n4; i += 4) {
        const simd::word_t in = simd::read_q7x4(p + i);
        const simd::word_t msb = simd::ror(in & 0x80808080u, 7);
        const simd::word_t mask = simd::qsub8(0u, msb);
        simd::write_q7x4(p + i, in & ~mask);
    }
    for (std::size_t i = n4; i < data.size(); ++i) {
        if (p[i] < 0) {
            p[i] = 0;
        }
    }
}

std::string to_string(LutFunc f)
{
    return f == LutFunc::Sigmoid ? "sigmoid" : "tanh";
}

std::string to_string(LutMode m)
{
    return m == LutMode::Unified ? "unified" : "two_region";
}

LutFunc parse_lut_func(const std::string& s)
{
    if (s == "sigmoid") {
        return LutFunc::Sigmoid;
    }
    if (s == "tanh") {
        return LutFunc::Tanh;
    }
    throw ParamError("unknown activation function '" + s + "'");
}

LutMode parse_lut_mode(const std::string& s)
{
    if (s == "unified") {
        return LutMode::Unified;
    }
    if (s == "two_region") {
        return LutMode::TwoRegion;
    }
    throw ParamError("unknown table mode '" + s + "'");
}

double activation_real(LutFunc f, double x) noexcept
{
    return f == LutFunc::Sigmoid ? 1.0 / (1.0 + std::exp(-x)) : std::tanh(x);
}

namespace {

bool power_of_two(int n) noexcept
{
    return n > 0 && std::has_single_bit(static_cast<unsigned>(n));
}

int log2i(int n) noexcept
{
    return std::countr_zero(static_cast<unsigned>(n));
}

void sample(std::vector<q15_t>& dst, LutFunc f, double lo, double step, int count, int width)
{
    for (int i = 0; i < count; ++i) {
        dst.push_back(static_cast<q15_t>(quantize_real(activation_real(f, lo + step * i), width - 1, width).value));
    }
}

// Sample for position `u` (unsigned, `bits` wide) in a table of `n` entries.
std::int32_t lookup(std::span<const q15_t> t, std::uint32_t u, int bits, bool interpolate) noexcept
{
    const int n = static_cast<int>(t.size());
    const int shift = bits - log2i(n);
    if (!interpolate) {
        const std::uint32_t idx = shift > 0 ? (u + (1u << (shift - 1))) >> shift : u;
        return t[std::min<std::uint32_t>(idx, static_cast<std::uint32_t>(n - 1))];
    }
    const std::uint32_t idx = u >> shift;
    const std::int64_t frac = u & ((1u << shift) - 1u);
    const std::int32_t y0 = t[idx];
    const std::int32_t y1 = t[std::min<std::uint32_t>(idx + 1, static_cast<std::uint32_t>(n - 1))];
    if (shift == 0) {
        return y0;
    }
    return y0 + static_cast<std::int32_t>(((y1 - y0) * frac + (std::int64_t{1} << (shift - 1))) >> shift);
}

template <class In, class Out>
void apply_impl(std::span<const In> in, int in_frac_bits, const LutTable& t, bool interpolate, std::span<Out> out)
{
    constexpr int out_width = 8 * static_cast<int>(sizeof(Out));
    if (t.elem_width != out_width) {
        throw ParamError("apply_lut: table holds q" + std::to_string(t.elem_width - 1) + " entries, output is q" +
                         std::to_string(out_width - 1));
    }
    const int native = t.native_frac_bits(16);
    if (in_frac_bits < 0 || in_frac_bits > native) {
        throw ParamError("apply_lut: input frac_bits " + std::to_string(in_frac_bits) +
                         " exceeds table format (max " + std::to_string(native) + ")");
    }
    if (out.size() < in.size()) {
        throw ShapeError("apply_lut: output smaller than input");
    }
    if (t.values.size() != static_cast<std::size_t>(t.entries)) {
        throw ParamError("apply_lut: table holds " + std::to_string(t.values.size()) + " values, header says " +
                         std::to_string(t.entries));
    }
    const int up = native - in_frac_bits;
    const auto coarse = t.coarse();
    const auto fine = t.fine();
    for (std::size_t i = 0; i < in.size(); ++i) {
        // Position in the table's q15 input format, saturated to [-R, R).
        const std::int64_t wide = static_cast<std::int64_t>(in[i]) * (std::int64_t{1} << up);
        const auto p = static_cast<std::int32_t>(std::clamp<std::int64_t>(wide, -32768, 32767));
        std::int32_t y = 0;
        // The fine region [-R/4, R/4) is where the top three bits agree.
        if (t.mode == LutMode::TwoRegion && p >= -8192 && p < 8192) {
            y = lookup(fine, static_cast<std::uint32_t>(p + 8192), 14, interpolate);
        } else {
            y = lookup(coarse, static_cast<std::uint32_t>(p + 32768), 16, interpolate);
        }
        out[i] = static_cast<Out>(y);
    }
}

} // namespace

LutTable build_lut(LutFunc func, LutMode mode, int range_pow, int entries, int elem_width)
{
    if (range_pow != 2 && range_pow != 3) {
        throw ParamError("build_lut: range_pow must be 2 or 3, got " + std::to_string(range_pow));
    }
    if (elem_width != 8 && elem_width != 16) {
        throw ParamError("build_lut: elem_width must be 8 or 16");
    }
    const bool two = mode == LutMode::TwoRegion;
    if (!power_of_two(entries) || entries < (two ? 4 : 2) || entries > (two ? 32768 : 65536)) {
        throw ParamError("build_lut: invalid entry count " + std::to_string(entries));
    }
    LutTable t;
    t.func = func;
    t.mode = mode;
    t.range_pow = range_pow;
    t.entries = entries;
    t.elem_width = elem_width;
    t.values.reserve(static_cast<std::size_t>(entries));

    const double range = std::ldexp(1.0, range_pow);
    if (two) {
        const int half = entries / 2;
        sample(t.values, func, -range / 4, (range / 2) / half, half, elem_width);
        sample(t.values, func, -range, (2 * range) / half, half, elem_width);
    } else {
        sample(t.values, func, -range, (2 * range) / entries, entries, elem_width);
    }
    return t;
}

void apply_lut(std::span<const q7_t> in, int in_frac_bits, const LutTable& t, bool interpolate, std::span<q7_t> out)
{
    apply_impl(in, in_frac_bits, t, interpolate, out);
}

void apply_lut(std::span<const q15_t> in, int in_frac_bits, const LutTable& t, bool interpolate, std::span<q7_t> out)
{
    apply_impl(in, in_frac_bits, t, interpolate, out);
}

void apply_lut(std::span<const q7_t> in, int in_frac_bits, const LutTable& t, bool interpolate,
               std::span<q15_t> out)
{
    apply_impl(in, in_frac_bits, t, interpolate, out);
}

void apply_lut(std::span<const q15_t> in, int in_frac_bits, const LutTable& t, bool interpolate,
               std::span<q15_t> out)
{
    apply_impl(in, in_frac_bits, t, interpolate, out);
}

double lut_max_abs_error(const LutTable& t, bool interpolate, int points)
{
    const double range = std::ldexp(1.0, t.range_pow);
    const int in_frac = t.native_frac_bits(16);
    std::vector<q15_t> xs(static_cast<std::size_t>(points));
    std::vector<double> real_x(xs.size());
    for (int i = 0; i < points; ++i) {
        const double x = points > 1 ? -range + 2.0 * range * i / (points - 1) : 0.0;
        real_x[static_cast<std::size_t>(i)] = x;
        xs[static_cast<std::size_t>(i)] = static_cast<q15_t>(quantize_real(x, in_frac, 16).value);
    }
    double worst = 0.0;
    auto measure = [&](auto& ys) {
        apply_lut(std::span<const q15_t>(xs), in_frac, t, interpolate, std::span(ys));
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double err =
                std::abs(dequantize(ys[i], t.out_frac_bits()) - activation_real(t.func, real_x[i]));
            worst = std::max(worst, err);
        }
    };
    if (t.elem_width == 8) {
        std::vector<q7_t> ys(xs.size());
        measure(ys);
    } else {
        std::vector<q15_t> ys(xs.size());
        measure(ys);
    }
    return worst;
}

} // namespace qnn
