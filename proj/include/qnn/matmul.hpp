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

#include <span>
#include <vector>

#include "qnn/quant.hpp"
#include "qnn/types.hpp"

namespace qnn {

/// Quantized matrix product with a 2x2 output block per inner-loop pass.
///
/// `a` is rows x inner, row-major. `b_cols` holds `cols` columns of length
/// `inner`, each stored contiguously (column-major B). The accumulator for
/// row r starts at bias[r] << bias_left_shift; every output is
/// requantize(acc, out_right_shift) saturated to Out. The result is written
/// column-major: out[c * rows + r].
///
/// Accumulation wraps at 32 bits; operands must be sized so a valid network
/// never reaches that. Throws ShapeError on any size mismatch.
template <class Out>
void matmul_q15_2x2(std::span<const q15_t> a, std::span<const q15_t> b_cols, std::span<const q31_t> bias, int rows,
                    int inner, int cols, const QuantParams& q, std::span<Out> out);

template <class Out>
std::vector<Out> matmul_q15_2x2(std::span<const q15_t> a, std::span<const q15_t> b_cols,
                                std::span<const q31_t> bias, int rows, int inner, int cols, const QuantParams& q);

extern template void matmul_q15_2x2<q7_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>, int,
                                          int, int, const QuantParams&, std::span<q7_t>);
extern template void matmul_q15_2x2<q15_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>,
                                           int, int, int, const QuantParams&, std::span<q15_t>);
extern template std::vector<q7_t> matmul_q15_2x2<q7_t>(std::span<const q15_t>, std::span<const q15_t>,
                                                       std::span<const q31_t>, int, int, int, const QuantParams&);
extern template std::vector<q15_t> matmul_q15_2x2<q15_t>(std::span<const q15_t>, std::span<const q15_t>,
                                                         std::span<const q31_t>, int, int, int, const QuantParams&);

} // namespace qnn
