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

#include "qnn/convolution.hpp"

#include <algorithm>
#include <string>

#include "mat_mult_kernel.hpp"

namespace qnn {

namespace {

void gather_columns(std::span<const q7_t> input, const Shape& in_shape, const ConvParams& p, int out_width,
                    q15_t* dst, int start_patch, int n_patches)
{
    const std::size_t ch = static_cast<std::size_t>(in_shape.channels);
    for (int j = 0; j < n_patches; ++j) {
        const int patch = start_patch + j;
        const int oy = patch / out_width;
        const int ox = patch % out_width;
        for (int ky = oy * p.stride - p.pad; ky < oy * p.stride - p.pad + p.kernel; ++ky) {
            for (int kx = ox * p.stride - p.pad; kx < ox * p.stride - p.pad + p.kernel; ++kx) {
                if (ky < 0 || ky >= in_shape.height || kx < 0 || kx >= in_shape.width) {
                    std::fill_n(dst, ch, q15_t{0});
                } else {
                    // A whole pixel is one contiguous channel run in HWC.
                    q7_to_q15_ordered(input.subspan(in_shape.offset(ky, kx, 0), ch), std::span<q15_t>(dst, ch));
                }
                dst += ch;
            }
        }
    }
}

} // namespace

void ConvParams::validate() const
{
    if (kernel < 1 || stride < 1 || pad < 0) {
        throw ParamError("conv: kernel and stride must be >= 1 and pad >= 0 (K=" + std::to_string(kernel) +
                         " S=" + std::to_string(stride) + " P=" + std::to_string(pad) + ")");
    }
    if (partial_cols < 2 || partial_cols % 2 != 0) {
        throw ParamError("conv: partial_cols must be even and >= 2, got " + std::to_string(partial_cols));
    }
    quant.validate();
}

int conv_output_dim(int n, int kernel, int stride, int pad) noexcept
{
    const int span = n + 2 * pad - kernel;
    if (span < 0 || stride < 1) {
        return 0;
    }
    return span / stride + 1;
}

Shape conv_output_shape(const Shape& in, int kernel, int stride, int pad, int out_channels)
{
    const Shape out{conv_output_dim(in.height, kernel, stride, pad), conv_output_dim(in.width, kernel, stride, pad),
                    out_channels};
    if (!in.valid() || !out.valid()) {
        throw ParamError("conv geometry gives empty output: input " + in.str() + ", K=" + std::to_string(kernel) +
                         " S=" + std::to_string(stride) + " P=" + std::to_string(pad));
    }
    return out;
}

std::size_t conv_scratch_size(const Shape& in, const ConvParams& p) noexcept
{
    return static_cast<std::size_t>(p.partial_cols) * static_cast<std::size_t>(p.kernel) *
           static_cast<std::size_t>(p.kernel) * static_cast<std::size_t>(in.channels);
}

void im2col_partial(std::span<const q7_t> input, const Shape& in_shape, const ConvParams& p,
                    std::span<q15_t> col_buf, int start_patch, int n_patches)
{
    p.validate();
    if (input.size() != in_shape.size()) {
        throw ShapeError("im2col_partial: input length does not match " + in_shape.str());
    }
    const Shape out = conv_output_shape(in_shape, p.kernel, p.stride, p.pad, 1);
    const int patches = out.height * out.width;
    if (start_patch < 0 || n_patches < 0 || n_patches > p.partial_cols || start_patch + n_patches > patches) {
        throw ParamError("im2col_partial: patches [" + std::to_string(start_patch) + ", " +
                         std::to_string(start_patch + n_patches) + ") outside [0, " + std::to_string(patches) +
                         ") or more than partial_cols");
    }
    const std::size_t ch = static_cast<std::size_t>(in_shape.channels);
    const std::size_t col_len = static_cast<std::size_t>(p.kernel) * p.kernel * ch;
    if (col_buf.size() < col_len * static_cast<std::size_t>(n_patches)) {
        throw ScratchError("im2col_partial: column buffer too small");
    }

    gather_columns(input, in_shape, p, out.width, col_buf.data(), start_patch, n_patches);
}

void im2col_partial(const Q7Tensor& input, const ConvParams& p, std::span<q15_t> col_buf, int start_patch,
                    int n_patches)
{
    im2col_partial(input.data(), input.shape(), p, col_buf, start_patch, n_patches);
}

void conv_hwc_q7(std::span<const q7_t> input, const Shape& in_shape, std::span<const q7_t> weights,
                 std::span<const q7_t> bias, const ConvParams& p, std::span<q15_t> scratch, std::span<q7_t> out)
{
    p.validate();
    const int out_ch = static_cast<int>(bias.size());
    const Shape out_shape = conv_output_shape(in_shape, p.kernel, p.stride, p.pad, out_ch);
    const std::size_t inner = static_cast<std::size_t>(p.kernel) * p.kernel * in_shape.channels;
    if (input.size() != in_shape.size()) {
        throw ShapeError("conv_hwc_q7: input length does not match " + in_shape.str());
    }
    if (weights.size() != inner * static_cast<std::size_t>(out_ch)) {
        throw ShapeError("conv_hwc_q7: expected " + std::to_string(inner * out_ch) + " weights, got " +
                         std::to_string(weights.size()));
    }
    if (out.size() < out_shape.size()) {
        throw ShapeError("conv_hwc_q7: output buffer smaller than " + out_shape.str());
    }
    if (scratch.size() < conv_scratch_size(in_shape, p)) {
        throw ScratchError("conv_hwc_q7: scratch holds " + std::to_string(scratch.size()) + " entries, needs " +
                           std::to_string(conv_scratch_size(in_shape, p)));
    }

    const int patches = out_shape.height * out_shape.width;
    for (int start = 0; start < patches; start += p.partial_cols) {
        const int n = std::min(p.partial_cols, patches - start);
        gather_columns(input, in_shape, p, out_shape.width, scratch.data(), start, n);
        detail::mat_mult_2x2(weights.data(), out_ch, static_cast<int>(inner), scratch.data(), n, bias.data(),
                             p.quant, out.data() + static_cast<std::size_t>(start) * out_ch);
    }
}

Q7Tensor conv_hwc_q7(const Q7Tensor& input, std::span<const q7_t> weights, std::span<const q7_t> bias,
                     const ConvParams& p, int out_frac_bits)
{
    p.validate();
    Q7Tensor out(conv_output_shape(input.shape(), p.kernel, p.stride, p.pad, static_cast<int>(bias.size())),
                 out_frac_bits);
    std::vector<q15_t> scratch(conv_scratch_size(input.shape(), p));
    conv_hwc_q7(input.data(), input.shape(), weights, bias, p, scratch, out.data());
    return out;
}

std::size_t depthwise_scratch_size(const Shape& in, const ConvParams& p) noexcept
{
    return static_cast<std::size_t>(p.kernel) * static_cast<std::size_t>(p.kernel) *
           static_cast<std::size_t>(in.channels);
}

void depthwise_conv_hwc_q7(std::span<const q7_t> input, const Shape& in_shape, std::span<const q7_t> weights,
                           std::span<const q7_t> bias, const ConvParams& p, std::span<q15_t> scratch,
                           std::span<q7_t> out)
{
    p.validate();
    const int ch = in_shape.channels;
    if (static_cast<int>(bias.size()) != ch) {
        throw ShapeError("depthwise_conv_hwc_q7: bias has " + std::to_string(bias.size()) + " entries for " +
                         std::to_string(ch) + " channels");
    }
    const Shape out_shape = conv_output_shape(in_shape, p.kernel, p.stride, p.pad, ch);
    const std::size_t taps = static_cast<std::size_t>(p.kernel) * p.kernel;
    if (input.size() != in_shape.size()) {
        throw ShapeError("depthwise_conv_hwc_q7: input length does not match " + in_shape.str());
    }
    if (weights.size() != taps * static_cast<std::size_t>(ch)) {
        throw ShapeError("depthwise_conv_hwc_q7: expected " + std::to_string(taps * ch) + " weights, got " +
                         std::to_string(weights.size()));
    }
    if (out.size() < out_shape.size()) {
        throw ShapeError("depthwise_conv_hwc_q7: output buffer smaller than " + out_shape.str());
    }
    if (scratch.size() < depthwise_scratch_size(in_shape, p)) {
        throw ScratchError("depthwise_conv_hwc_q7: scratch too small");
    }

    const int patches = out_shape.height * out_shape.width;
    q7_t* dst = out.data();
    for (int patch = 0; patch < patches; ++patch) {
        gather_columns(input, in_shape, p, out_shape.width, scratch.data(), patch, 1);
        // Column and weights share the [ky][kx][c] layout, so channel c is a
        // stride-C walk through both.
        for (int c = 0; c < ch; ++c) {
            q31_t sum = detail::bias_init(bias[c], p.quant.bias_left_shift);
            const q15_t* col = scratch.data() + c;
            const q7_t* w = weights.data() + c;
            for (std::size_t t = 0; t < taps; ++t) {
                sum = detail::mac(sum, col[t * ch], w[t * ch]);
            }
            *dst++ = requantize_to<q7_t>(sum, p.quant.out_right_shift);
        }
    }
}

Q7Tensor depthwise_conv_hwc_q7(const Q7Tensor& input, std::span<const q7_t> weights, std::span<const q7_t> bias,
                               const ConvParams& p, int out_frac_bits)
{
    p.validate();
    Q7Tensor out(conv_output_shape(input.shape(), p.kernel, p.stride, p.pad, input.channels()), out_frac_bits);
    std::vector<q15_t> scratch(depthwise_scratch_size(input.shape(), p));
    depthwise_conv_hwc_q7(input.data(), input.shape(), weights, bias, p, scratch, out.data());
    return out;
}

} // namespace qnn
