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

// Power-of-two fixed-point quantization.
//
// A quantized value stores an integer `value` and a count of fractional bits
// `frac_bits`; the real number it stands for is value * 2^-frac_bits. All
// rescaling between formats is a shift.

#include <cstdint>
#include <span>
#include <vector>

#include "qnn/types.hpp"

namespace qnn {

struct QScalar {
    std::int32_t value = 0;
    int frac_bits = 0;
    int width = 8; ///< 8, 16 or 32

    double real() const noexcept;
    bool operator==(const QScalar&) const = default;
};

/// Shifts applied by a layer: bias << bias_left_shift enters the accumulator,
/// and the accumulator is rounded >> out_right_shift on the way out.
struct QuantParams {
    int bias_left_shift = 0;
    int out_right_shift = 0;

    /// Throws ParamError unless both shifts are in [0, 31].
    void validate() const;

    /// True when input_frac + weight_frac == bias_frac + bias_left_shift
    ///              == output_frac + out_right_shift.
    bool consistent(int input_frac, int weight_frac, int bias_frac, int output_frac) const noexcept;

    bool operator==(const QuantParams&) const = default;
};

/// Largest and smallest integer representable in a signed `width`-bit lane.
constexpr std::int64_t qmax(int width) noexcept { return (std::int64_t{1} << (width - 1)) - 1; }
constexpr std::int64_t qmin(int width) noexcept { return -(std::int64_t{1} << (width - 1)); }

/// Round-to-nearest (ties away from zero) of x * 2^frac_bits, saturated.
/// Throws ParamError for width other than 8/16/32 or frac_bits outside [0, width-1].
QScalar quantize_real(double x, int frac_bits, int width);

double dequantize(std::int64_t value, int frac_bits) noexcept;

/// (acc + 2^(shift-1)) >> shift, saturated to `width` bits. shift 0 only saturates.
std::int32_t requantize(std::int64_t acc, int out_right_shift, int width);

template <class T>
T requantize_to(std::int64_t acc, int out_right_shift)
{
    return static_cast<T>(requantize(acc, out_right_shift, 8 * static_cast<int>(sizeof(T))));
}

/// q7 -> q15 with the output in input order. The 4-aligned body goes through
/// SXTB16/ROR and PKHBT/PKHTB repacking; the tail is copied scalar.
void q7_to_q15_ordered(std::span<const q7_t> src, std::span<q15_t> dst);
std::vector<q15_t> q7_to_q15_ordered(std::span<const q7_t> src);

/// q7 -> q15 without the repacking step: each group [a,b,c,d] comes out as
/// [a,c,b,d]. A tail shorter than four is copied in order.
void q7_to_q15_noreorder(std::span<const q7_t> src, std::span<q15_t> dst);
std::vector<q15_t> q7_to_q15_noreorder(std::span<const q7_t> src);

/// Swaps the middle two bytes of every full 4-group, so that a later
/// q7_to_q15_noreorder yields the original order. The tail is left as is,
/// matching the in-order tail of the expansion. Self-inverse.
std::vector<q7_t> weight_byteswap_preprocess(std::span<const q7_t> w);

/// Row-wise form of weight_byteswap_preprocess for a row-major matrix; every
/// row is treated as its own sequence.
std::vector<q7_t> weight_byteswap_preprocess_rows(std::span<const q7_t> w, int rows, int cols);

} // namespace qnn
