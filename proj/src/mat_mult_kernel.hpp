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

// 2x2 register-blocked matrix kernel shared by matmul_q15_2x2 and the
// convolution. The left operand is row-major (q7 or q15), the right operand
// is a set of q15 columns stored contiguously, and the result is written
// column-major so consecutive columns land as consecutive HWC pixels.

#include <cstdint>

#include "qnn/packed_ops.hpp"
#include "qnn/quant.hpp"

namespace qnn::detail {

// Wrapping q31 multiply-accumulate, for the scalar tails.
inline q31_t mac(q31_t acc, std::int32_t a, std::int32_t b) noexcept
{
    return static_cast<q31_t>(static_cast<std::uint32_t>(acc) + static_cast<std::uint32_t>(a * b));
}

inline q31_t bias_init(std::int32_t bias, int bias_left_shift) noexcept
{
    return static_cast<q31_t>(static_cast<std::uint32_t>(bias) << bias_left_shift);
}

// Four consecutive left-operand entries as two packed q15 pairs in natural order.
struct Pairs {
    simd::word_t lo;
    simd::word_t hi;
};

inline Pairs load4(const q15_t* p) noexcept
{
    return {simd::read_q15x2(p), simd::read_q15x2(p + 2)};
}

// q7 weights are sign-extended on the fly and repacked to natural order.
inline Pairs load4(const q7_t* p) noexcept
{
    const simd::word_t in = simd::read_q7x4(p);
    const simd::word_t even = simd::sxtb16(in);
    const simd::word_t odd = simd::sxtb16_ror8(in);
    return {simd::pkhbt(even, odd, 16), simd::pkhtb(odd, even, 16)};
}

template <class AElem, class BiasT, class Out>
void mat_mult_2x2(const AElem* a, int rows, int inner, const q15_t* b, int cols, const BiasT* bias,
                  const QuantParams& q, Out* out)
{
    const int bls = q.bias_left_shift;
    const int ors = q.out_right_shift;
    const int inner4 = inner & ~3;

    auto one_by_one = [&](int r, int c) {
        const AElem* pa = a + static_cast<std::ptrdiff_t>(r) * inner;
        const q15_t* pb = b + static_cast<std::ptrdiff_t>(c) * inner;
        q31_t sum = bias_init(bias[r], bls);
        int k = 0;
        for (; k < inner4; k += 4) {
            const Pairs wa = load4(pa + k);
            sum = simd::smlad(wa.lo, simd::read_q15x2(pb + k), sum);
            sum = simd::smlad(wa.hi, simd::read_q15x2(pb + k + 2), sum);
        }
        for (; k < inner; ++k) {
            sum = mac(sum, pa[k], pb[k]);
        }
        out[static_cast<std::ptrdiff_t>(c) * rows + r] = requantize_to<Out>(sum, ors);
    };

    int c = 0;
    for (; c + 1 < cols; c += 2) {
        const q15_t* b0 = b + static_cast<std::ptrdiff_t>(c) * inner;
        const q15_t* b1 = b0 + inner;
        Out* out0 = out + static_cast<std::ptrdiff_t>(c) * rows;
        Out* out1 = out0 + rows;

        int r = 0;
        for (; r + 1 < rows; r += 2) {
            const AElem* a0 = a + static_cast<std::ptrdiff_t>(r) * inner;
            const AElem* a1 = a0 + inner;
            q31_t sum00 = bias_init(bias[r], bls);
            q31_t sum01 = sum00;
            q31_t sum10 = bias_init(bias[r + 1], bls);
            q31_t sum11 = sum10;

            int k = 0;
            for (; k < inner4; k += 4) {
                const simd::word_t x0 = simd::read_q15x2(b0 + k);
                const simd::word_t x1 = simd::read_q15x2(b1 + k);
                const simd::word_t x2 = simd::read_q15x2(b0 + k + 2);
                const simd::word_t x3 = simd::read_q15x2(b1 + k + 2);
                const Pairs w0 = load4(a0 + k);
                const Pairs w1 = load4(a1 + k);

                sum00 = simd::smlad(w0.lo, x0, sum00);
                sum01 = simd::smlad(w0.lo, x1, sum01);
                sum10 = simd::smlad(w1.lo, x0, sum10);
                sum11 = simd::smlad(w1.lo, x1, sum11);

                sum00 = simd::smlad(w0.hi, x2, sum00);
                sum01 = simd::smlad(w0.hi, x3, sum01);
                sum10 = simd::smlad(w1.hi, x2, sum10);
                sum11 = simd::smlad(w1.hi, x3, sum11);
            }
            for (; k < inner; ++k) {
                sum00 = mac(sum00, a0[k], b0[k]);
                sum01 = mac(sum01, a0[k], b1[k]);
                sum10 = mac(sum10, a1[k], b0[k]);
                sum11 = mac(sum11, a1[k], b1[k]);
            }
            out0[r] = requantize_to<Out>(sum00, ors);
            out0[r + 1] = requantize_to<Out>(sum10, ors);
            out1[r] = requantize_to<Out>(sum01, ors);
            out1[r + 1] = requantize_to<Out>(sum11, ors);
        }
        if (r < rows) {
            one_by_one(r, c);
            one_by_one(r, c + 1);
        }
    }
    if (c < cols) {
        for (int r = 0; r < rows; ++r) {
            one_by_one(r, c);
        }
    }
}

} // namespace qnn::detail
