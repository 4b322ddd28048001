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

// Portable models of the Armv7E-M DSP instructions used by the kernels.
//
// A packed word is a 32-bit value holding either four signed 8-bit lanes or
// two signed 16-bit lanes. Lane 0 always lives in the least significant
// bits; lanes are defined on the integer value, so behaviour does not depend
// on host byte order. Memory helpers below read and write little-endian.

#include <cstdint>

#include "qnn/types.hpp"

namespace qnn::simd {

using word_t = std::uint32_t;

constexpr q7_t lane8(word_t w, int lane) noexcept
{
    return static_cast<q7_t>(static_cast<std::uint8_t>(w >> (8 * lane)));
}

constexpr q15_t lane16(word_t w, int lane) noexcept
{
    return static_cast<q15_t>(static_cast<std::uint16_t>(w >> (16 * lane)));
}

constexpr word_t pack_q7x4(q7_t l0, q7_t l1, q7_t l2, q7_t l3) noexcept
{
    return static_cast<word_t>(static_cast<std::uint8_t>(l0)) |
           static_cast<word_t>(static_cast<std::uint8_t>(l1)) << 8 |
           static_cast<word_t>(static_cast<std::uint8_t>(l2)) << 16 |
           static_cast<word_t>(static_cast<std::uint8_t>(l3)) << 24;
}

constexpr word_t pack_q15x2(q15_t l0, q15_t l1) noexcept
{
    return static_cast<word_t>(static_cast<std::uint16_t>(l0)) |
           static_cast<word_t>(static_cast<std::uint16_t>(l1)) << 16;
}

constexpr word_t ror(word_t w, unsigned n) noexcept
{
    n &= 31u;
    return n == 0 ? w : (w >> n) | (w << (32u - n));
}

/// SXTB16: sign-extend bytes 0 and 2 into the two halfwords.
constexpr word_t sxtb16(word_t w) noexcept
{
    return pack_q15x2(lane8(w, 0), lane8(w, 2));
}

/// SXTB16 with ROR #8: sign-extend bytes 1 and 3.
constexpr word_t sxtb16_ror8(word_t w) noexcept
{
    return sxtb16(ror(w, 8));
}

/// PKHBT: bottom half of `a`, top half of `b << shift`.
constexpr word_t pkhbt(word_t a, word_t b, unsigned shift) noexcept
{
    return (a & 0x0000FFFFu) | ((b << shift) & 0xFFFF0000u);
}

/// PKHTB: top half of `a`, bottom half of `b >> shift` (arithmetic).
constexpr word_t pkhtb(word_t a, word_t b, unsigned shift) noexcept
{
    const auto shifted = static_cast<word_t>(static_cast<std::int32_t>(b) >> shift);
    return (a & 0xFFFF0000u) | (shifted & 0x0000FFFFu);
}

/// SMLAD: acc + x.lo*y.lo + x.hi*y.hi, wrapping at 32 bits like the instruction.
constexpr q31_t smlad(word_t x, word_t y, q31_t acc) noexcept
{
    const auto p0 = static_cast<std::int32_t>(lane16(x, 0)) * lane16(y, 0);
    const auto p1 = static_cast<std::int32_t>(lane16(x, 1)) * lane16(y, 1);
    const auto sum = static_cast<std::uint32_t>(acc) + static_cast<std::uint32_t>(p0) +
                     static_cast<std::uint32_t>(p1);
    return static_cast<q31_t>(sum);
}

constexpr q7_t ssat_q7(std::int64_t v) noexcept
{
    return static_cast<q7_t>(v < -128 ? -128 : (v > 127 ? 127 : v));
}

constexpr q15_t ssat_q15(std::int64_t v) noexcept
{
    return static_cast<q15_t>(v < -32768 ? -32768 : (v > 32767 ? 32767 : v));
}

/// QSUB8: per-byte saturating signed subtraction x - y.
constexpr word_t qsub8(word_t x, word_t y) noexcept
{
    word_t out = 0;
    for (int i = 0; i < 4; ++i) {
        const int d = static_cast<int>(lane8(x, i)) - static_cast<int>(lane8(y, i));
        out |= static_cast<word_t>(static_cast<std::uint8_t>(ssat_q7(d))) << (8 * i);
    }
    return out;
}

inline word_t read_q7x4(const q7_t* p) noexcept
{
    return pack_q7x4(p[0], p[1], p[2], p[3]);
}

inline word_t read_q15x2(const q15_t* p) noexcept
{
    return pack_q15x2(p[0], p[1]);
}

inline void write_q7x4(q7_t* p, word_t w) noexcept
{
    for (int i = 0; i < 4; ++i) {
        p[i] = lane8(w, i);
    }
}

inline void write_q15x2(q15_t* p, word_t w) noexcept
{
    p[0] = lane16(w, 0);
    p[1] = lane16(w, 1);
}

} // namespace qnn::simd
