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

// ReLU and table-driven sigmoid/tanh.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qnn/types.hpp"

namespace qnn {

/// In-place ReLU on q7 data, four lanes per 32-bit word. Each lane's sign
/// bit is rotated down to bit 0 and QSUB8(0, .) turns it into a 0xFF mask.
void relu_q7(std::span<q7_t> data) noexcept;

enum class LutFunc : std::uint8_t { Sigmoid = 0, Tanh = 1 };
enum class LutMode : std::uint8_t { Unified = 0, TwoRegion = 1 };

std::string to_string(LutFunc f);
std::string to_string(LutMode m);
LutFunc parse_lut_func(const std::string& s);
LutMode parse_lut_mode(const std::string& s);

/// Sampled activation function.
///
/// The table covers inputs in [-R, R) with R = 2^range_pow. Unified tables
/// hold `entries` samples at -R + i * 2R / entries. Two-region tables split
/// the entries in half: a fine table over [-R/4, R/4) and a coarse table over
/// the whole range; `values` holds the fine table first. Samples are stored
/// in q0.7 (elem_width 8) or q0.15 (elem_width 16).
struct LutTable {
    LutFunc func = LutFunc::Sigmoid;
    LutMode mode = LutMode::Unified;
    int range_pow = 3;
    int entries = 256;
    int elem_width = 8;
    std::vector<q15_t> values;

    int out_frac_bits() const noexcept { return elem_width - 1; }
    /// Input fractional bits at which a value of `width` bits spans [-R, R).
    int native_frac_bits(int width) const noexcept { return width - 1 - range_pow; }
    int fine_entries() const noexcept { return mode == LutMode::TwoRegion ? entries / 2 : 0; }
    int coarse_entries() const noexcept { return mode == LutMode::TwoRegion ? entries / 2 : entries; }
    std::span<const q15_t> fine() const noexcept
    {
        return std::span<const q15_t>(values).first(static_cast<std::size_t>(fine_entries()));
    }
    std::span<const q15_t> coarse() const noexcept
    {
        return std::span<const q15_t>(values).subspan(static_cast<std::size_t>(fine_entries()));
    }
};

/// Throws ParamError unless entries is a power of two (>= 2 unified, >= 4
/// two-region, <= 65536 / 32768), range_pow is 2 or 3, elem_width is 8 or 16.
LutTable build_lut(LutFunc func, LutMode mode, int range_pow, int entries, int elem_width = 8);

/// Applies the table element-wise. `in_frac_bits` must not exceed
/// 15 - range_pow (for q7 input, 7 - range_pow spans exactly [-R, R));
/// smaller values widen the input range, and inputs beyond R saturate at the
/// table ends. The table's elem_width
/// must match the output element type. Without interpolation the nearest
/// sample is used; with it, the high bits select a sample and the low bits
/// blend it with the next one.
void apply_lut(std::span<const q7_t> in, int in_frac_bits, const LutTable& t, bool interpolate, std::span<q7_t> out);
void apply_lut(std::span<const q15_t> in, int in_frac_bits, const LutTable& t, bool interpolate, std::span<q7_t> out);
void apply_lut(std::span<const q7_t> in, int in_frac_bits, const LutTable& t, bool interpolate,
               std::span<q15_t> out);
void apply_lut(std::span<const q15_t> in, int in_frac_bits, const LutTable& t, bool interpolate,
               std::span<q15_t> out);

/// Exact value of the tabulated function.
double activation_real(LutFunc f, double x) noexcept;

/// Largest |table(x) - f(x)| over `points` evenly spaced real inputs in
/// [-R, R], with inputs fed as q15 at the table's native format.
double lut_max_abs_error(const LutTable& t, bool interpolate, int points = 100000);

} // namespace qnn
