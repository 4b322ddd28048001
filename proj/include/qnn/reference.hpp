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

// Straightforward nested-loop versions of every kernel.
//
// These are the ground truth for the optimized kernels and the baseline the
// bench harness times them against. They accumulate in 64-bit integers and
// share nothing with the kernels except requantize(). When a final
// accumulator falls outside the q31 range they throw AccumulatorOverflow,
// since the wrapping kernels would silently diverge there.

#include <span>
#include <vector>

#include "qnn/activation.hpp"
#include "qnn/pooling.hpp"
#include "qnn/quant.hpp"
#include "qnn/tensor.hpp"
#include "qnn/types.hpp"

namespace qnn::ref {

/// a: rows x inner row-major; b_cols: cols columns of length inner.
/// Result is column-major, out[c * rows + r].
template <class Out>
std::vector<Out> matmul(std::span<const q15_t> a, std::span<const q15_t> b_cols, std::span<const q31_t> bias,
                        int rows, int inner, int cols, const QuantParams& q);

/// w is row-major bias.size() x x.size() in natural order.
template <class In, class Out>
std::vector<Out> fully_connected(std::span<const In> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                                 const QuantParams& q);

/// weights [C_out][K][K][C_in], zero padding.
Q7Tensor conv(const Q7Tensor& in, std::span<const q7_t> weights, std::span<const q7_t> bias, int kernel, int stride,
              int pad, const QuantParams& q, int out_frac_bits);

/// weights [K][K][C].
Q7Tensor depthwise_conv(const Q7Tensor& in, std::span<const q7_t> weights, std::span<const q7_t> bias, int kernel,
                        int stride, int pad, const QuantParams& q, int out_frac_bits);

enum class PoolKind { Max, Average };

/// Window-at-a-time pooling. Max ignores padded positions; average divides
/// by kernel_h * kernel_w with padded positions counted as zero. Accepts any
/// geometry with pad < kernel.
Q7Tensor pool_window(const Q7Tensor& in, const PoolParams& p, PoolKind kind);

std::vector<q7_t> relu(std::span<const q7_t> x);

/// Table lookup computed with exact rational positions.
template <class In, class Out>
std::vector<Out> lut(std::span<const In> x, int in_frac_bits, const LutTable& t, bool interpolate);

double activation(LutFunc f, double x) noexcept;

} // namespace qnn::ref
