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

// HWC convolution through partial im2col and the 2x2 matrix kernel.

#include <span>
#include <vector>

#include "qnn/quant.hpp"
#include "qnn/tensor.hpp"
#include "qnn/types.hpp"

namespace qnn {

struct ConvParams {
    int kernel = 1;
    int stride = 1;
    int pad = 0;
    QuantParams quant{};
    /// im2col columns buffered before each matrix-kernel call. Even, >= 2.
    int partial_cols = 2;

    /// Throws ParamError on non-positive kernel/stride, negative pad, odd or
    /// too small partial_cols, or bad shifts.
    void validate() const;
};

/// floor((n + 2*pad - kernel) / stride) + 1, or 0 when the window never fits.
int conv_output_dim(int n, int kernel, int stride, int pad) noexcept;

/// Output shape of a convolution; throws ParamError when it would be empty.
Shape conv_output_shape(const Shape& in, int kernel, int stride, int pad, int out_channels);

/// q15 entries of scratch conv_hwc_q7 needs: partial_cols * K * K * C_in.
std::size_t conv_scratch_size(const Shape& in, const ConvParams& p) noexcept;

/// Fills `col_buf` with the receptive fields of output pixels
/// start_patch .. start_patch + n_patches - 1 (row-major pixel index). Each
/// column is K*K*C_in q15 entries in [ky][kx][c] order; positions in the
/// padding are zero. Throws ParamError when a patch index is out of range or
/// n_patches exceeds partial_cols, ScratchError when col_buf is too small.
void im2col_partial(std::span<const q7_t> input, const Shape& in_shape, const ConvParams& p,
                    std::span<q15_t> col_buf, int start_patch, int n_patches);
void im2col_partial(const Q7Tensor& input, const ConvParams& p, std::span<q15_t> col_buf, int start_patch,
                    int n_patches);

/// Standard convolution. `weights` are [C_out][K][K][C_in], `bias` has C_out
/// entries (which fixes C_out). `out` receives H_out x W_out x C_out in HWC.
void conv_hwc_q7(std::span<const q7_t> input, const Shape& in_shape, std::span<const q7_t> weights,
                 std::span<const q7_t> bias, const ConvParams& p, std::span<q15_t> scratch, std::span<q7_t> out);
Q7Tensor conv_hwc_q7(const Q7Tensor& input, std::span<const q7_t> weights, std::span<const q7_t> bias,
                     const ConvParams& p, int out_frac_bits);

/// q15 entries of scratch depthwise_conv_hwc_q7 needs: K * K * C.
std::size_t depthwise_scratch_size(const Shape& in, const ConvParams& p) noexcept;

/// Depthwise convolution: output channel c only sees input channel c.
/// `weights` are [K][K][C], `bias` has C entries.
void depthwise_conv_hwc_q7(std::span<const q7_t> input, const Shape& in_shape, std::span<const q7_t> weights,
                           std::span<const q7_t> bias, const ConvParams& p, std::span<q15_t> scratch,
                           std::span<q7_t> out);
Q7Tensor depthwise_conv_hwc_q7(const Q7Tensor& input, std::span<const q7_t> weights, std::span<const q7_t> bias,
                               const ConvParams& p, int out_frac_bits);

} // namespace qnn
