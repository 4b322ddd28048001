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

// Fully-connected (matrix-vector) kernels for batch size one.
//
// All variants compute, for every output row r,
//   out[r] = requantize(bias[r] << bias_left_shift + sum_k W[r][k] * x[k], out_right_shift)
// and differ only in how the weights are laid out and consumed.

#include <cstdint>
#include <span>
#include <vector>

#include "qnn/quant.hpp"
#include "qnn/types.hpp"

namespace qnn {

enum class WeightLayout : std::uint8_t {
    RowMajor,
    Interleaved1x4,
};

/// Weight matrix rearranged for the 1x4 matrix-vector kernel.
///
/// Within each band of four rows, every group of four columns c0..c3 is
/// stored as the 16 bytes
///   r0c0 r1c0 r0c2 r1c2 | r2c0 r3c0 r2c2 r3c2 | r0c1 r1c1 r0c3 r1c3 | r2c1 r3c1 r2c3 r3c3
/// so that SXTB16 / SXTB16(ROR 8) of each word yields (c0,c2) or (c1,c3)
/// pairs of one row, matching an input vector expanded without reordering.
/// Leftover columns of a band are stored as r0c r1c r2c r3c. Leftover rows
/// (rows % 4) follow in plain row-major order.
struct ReorderedWeights {
    int rows = 0;
    int cols = 0;
    WeightLayout layout = WeightLayout::RowMajor;
    std::vector<q7_t> blob;

    int leftover_rows() const noexcept { return rows % 4; }
    int leftover_cols() const noexcept { return cols % 4; }
};

ReorderedWeights weight_reorder_1x4(std::span<const q7_t> w, int rows, int cols);

/// Inverse of weight_reorder_1x4; returns the row-major matrix.
std::vector<q7_t> deinterleave_1x4(const ReorderedWeights& rw);

/// Scratch (q15 entries) needed by the q7 fully-connected kernels.
inline std::size_t fc_scratch_size(int cols) noexcept { return static_cast<std::size_t>(cols); }

/// Basic q7 x q7 kernel; works for any shape. `w` is rows x x.size() row-major.
void fully_connected_q7(std::span<const q7_t> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                        const QuantParams& q, std::span<q7_t> out, std::span<q15_t> scratch);
std::vector<q7_t> fully_connected_q7(std::span<const q7_t> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                                     const QuantParams& q);

/// 1x4 kernel over weights from weight_reorder_1x4. Bit-identical to the
/// basic kernel on the deinterleaved matrix. Throws ParamError if `w` is not
/// in the interleaved layout.
void fully_connected_q7_opt(std::span<const q7_t> x, const ReorderedWeights& w, std::span<const q7_t> bias,
                            const QuantParams& q, std::span<q7_t> out, std::span<q15_t> scratch);
std::vector<q7_t> fully_connected_q7_opt(std::span<const q7_t> x, const ReorderedWeights& w,
                                         std::span<const q7_t> bias, const QuantParams& q);

/// q15 activations with q7 weights. `w_swapped` must come from
/// weight_byteswap_preprocess_rows; the result matches the plain product
/// with the original matrix.
void fully_connected_mixed(std::span<const q15_t> x, std::span<const q7_t> w_swapped, std::span<const q7_t> bias,
                           const QuantParams& q, std::span<q15_t> out);
std::vector<q15_t> fully_connected_mixed(std::span<const q15_t> x, std::span<const q7_t> w_swapped,
                                         std::span<const q7_t> bias, const QuantParams& q);

} // namespace qnn
