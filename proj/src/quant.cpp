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

#include "qnn/quant.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qnn/packed_ops.hpp"

namespace qnn {

double QScalar::real() const noexcept
{
    return dequantize(value, frac_bits);
}

void QuantParams::validate() const
{
    if (bias_left_shift < 0 || bias_left_shift > 31 || out_right_shift < 0 || out_right_shift > 31) {
        throw ParamError("shift out of range [0, 31]: bias_left_shift=" + std::to_string(bias_left_shift) +
                         " out_right_shift=" + std::to_string(out_right_shift));
    }
}

bool QuantParams::consistent(int input_frac, int weight_frac, int bias_frac, int output_frac) const noexcept
{
    const int acc_frac = input_frac + weight_frac;
    return acc_frac == bias_frac + bias_left_shift && acc_frac == output_frac + out_right_shift;
}

QScalar quantize_real(double x, int frac_bits, int width)
{
    if (width != 8 && width != 16 && width != 32) {
        throw ParamError("unsupported width " + std::to_string(width));
    }
    if (frac_bits < 0 || frac_bits > width - 1) {
        throw ParamError("frac_bits " + std::to_string(frac_bits) + " invalid for width " + std::to_string(width));
    }
    const double scaled = std::round(std::ldexp(x, frac_bits)); // std::round ties away from zero
    std::int64_t v = 0;
    if (scaled >= static_cast<double>(qmax(width))) {
        v = qmax(width);
    } else if (scaled <= static_cast<double>(qmin(width))) {
        v = qmin(width);
    } else {
        v = static_cast<std::int64_t>(scaled);
    }
    return {static_cast<std::int32_t>(v), frac_bits, width};
}

double dequantize(std::int64_t value, int frac_bits) noexcept
{
    return std::ldexp(static_cast<double>(value), -frac_bits);
}

std::int32_t requantize(std::int64_t acc, int out_right_shift, int width)
{
    if (out_right_shift < 0 || out_right_shift > 62) {
        throw ParamError("out_right_shift out of range: " + std::to_string(out_right_shift));
    }
    std::int64_t v = acc;
    if (out_right_shift > 0) {
        v = (acc + (std::int64_t{1} << (out_right_shift - 1))) >> out_right_shift;
    }
    if (v > qmax(width)) {
        v = qmax(width);
    } else if (v < qmin(width)) {
        v = qmin(width);
    }
    return static_cast<std::int32_t>(v);
}

void q7_to_q15_ordered(std::span<const q7_t> src, std::span<q15_t> dst)
{
    if (dst.size() < src.size()) {
        throw ShapeError("q7_to_q15_ordered: destination too small");
    }
    const std::size_t body = src.size() & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        const simd::word_t in = simd::read_q7x4(&src[i]);
        const simd::word_t odd = simd::sxtb16_ror8(in);  // bytes 1, 3
        const simd::word_t even = simd::sxtb16(in);      // bytes 0, 2
        simd::write_q15x2(&dst[i], simd::pkhbt(even, odd, 16));
        simd::write_q15x2(&dst[i + 2], simd::pkhtb(odd, even, 16));
    }
    for (std::size_t i = body; i < src.size(); ++i) {
        dst[i] = src[i];
    }
}

std::vector<q15_t> q7_to_q15_ordered(std::span<const q7_t> src)
{
    std::vector<q15_t> out(src.size());
    q7_to_q15_ordered(src, out);
    return out;
}

void q7_to_q15_noreorder(std::span<const q7_t> src, std::span<q15_t> dst)
{
    if (dst.size() < src.size()) {
        throw ShapeError("q7_to_q15_noreorder: destination too small");
    }
    const std::size_t body = src.size() & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        const simd::word_t in = simd::read_q7x4(&src[i]);
        simd::write_q15x2(&dst[i], simd::sxtb16(in));
        simd::write_q15x2(&dst[i + 2], simd::sxtb16_ror8(in));
    }
    for (std::size_t i = body; i < src.size(); ++i) {
        dst[i] = src[i];
    }
}

std::vector<q15_t> q7_to_q15_noreorder(std::span<const q7_t> src)
{
    std::vector<q15_t> out(src.size());
    q7_to_q15_noreorder(src, out);
    return out;
}

std::vector<q7_t> weight_byteswap_preprocess(std::span<const q7_t> w)
{
    std::vector<q7_t> out(w.begin(), w.end());
    const std::size_t body = out.size() & ~std::size_t{3};
    for (std::size_t i = 0; i < body; i += 4) {
        std::swap(out[i + 1], out[i + 2]);
    }
    return out;
}

std::vector<q7_t> weight_byteswap_preprocess_rows(std::span<const q7_t> w, int rows, int cols)
{
    if (rows < 0 || cols < 0 || w.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw ShapeError("weight_byteswap_preprocess_rows: size does not match rows*cols");
    }
    std::vector<q7_t> out;
    out.reserve(w.size());
    for (int r = 0; r < rows; ++r) {
        auto row = weight_byteswap_preprocess(w.subspan(static_cast<std::size_t>(r) * cols, cols));
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

} // namespace qnn
