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

#include "qnn/pooling.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "qnn/packed_ops.hpp"

namespace qnn {

namespace {

using simd::word_t;

// 0xFF in every byte lane whose sign bit is set.
word_t sign_mask(word_t w) noexcept
{
    return simd::qsub8(0u, simd::ror(w & 0x80808080u, 7));
}

word_t max_q7x4(word_t a, word_t b) noexcept
{
    const word_t a_lt_b = sign_mask(simd::qsub8(a, b));
    return (a & ~a_lt_b) | (b & a_lt_b);
}

// dst[j] = max_i src[i * stride + j] for i < count, j < n. dst never lies
// after src, and each 4-lane block is fully read before it is written.
void max_blocks(q7_t* dst, const q7_t* src, std::ptrdiff_t stride, int count, std::size_t n)
{
    const std::size_t n4 = n & ~std::size_t{3};
    std::size_t j = 0;
    for (; j < n4; j += 4) {
        word_t acc = simd::read_q7x4(src + j);
        for (int i = 1; i < count; ++i) {
            acc = max_q7x4(acc, simd::read_q7x4(src + i * stride + j));
        }
        simd::write_q7x4(dst + j, acc);
    }
    for (; j < n; ++j) {
        q7_t acc = src[j];
        for (int i = 1; i < count; ++i) {
            acc = std::max(acc, src[i * stride + j]);
        }
        dst[j] = acc;
    }
}

struct Window {
    int first;
    int count;
};

Window clip(int out_index, int kernel, int stride, int pad, int extent) noexcept
{
    const int start = out_index * stride - pad;
    const int first = std::max(start, 0);
    const int last = std::min(start + kernel - 1, extent - 1);
    return {first, last - first + 1};
}

void check_buffer(std::size_t buf_size, const Shape& in, const char* who)
{
    if (buf_size < in.size()) {
        throw ShapeError(std::string(who) + ": buffer smaller than input " + in.str());
    }
}

} // namespace

Shape PoolParams::output_shape(const Shape& in) const
{
    if (!in.valid()) {
        throw ShapeError("pooling: invalid input shape " + in.str());
    }
    if (kernel_h < 1 || kernel_w < 1 || stride_h < 1 || stride_w < 1 || pad_h < 0 || pad_w < 0) {
        throw ParamError("pooling: kernel and stride must be >= 1 and pad >= 0");
    }
    if (pad_h >= kernel_h || pad_w >= kernel_w) {
        throw ParamError("pooling: pad must be smaller than the kernel");
    }
    if (pad_h > stride_h - 1 || pad_w > stride_w - 1) {
        throw ParamError("pooling: in-situ pooling needs pad <= stride - 1 (pad " + std::to_string(pad_h) + "x" +
                         std::to_string(pad_w) + ", stride " + std::to_string(stride_h) + "x" +
                         std::to_string(stride_w) + ")");
    }
    const int span_h = in.height + 2 * pad_h - kernel_h;
    const int span_w = in.width + 2 * pad_w - kernel_w;
    if (span_h < 0 || span_w < 0) {
        throw ParamError("pooling: window larger than padded input " + in.str());
    }
    const Shape out{span_h / stride_h + 1, span_w / stride_w + 1, in.channels};
    if (out.height > in.height || out.width > in.width) {
        throw ParamError("pooling: output " + out.str() + " does not fit in input " + in.str());
    }
    return out;
}

Shape maxpool_insitu(std::span<q7_t> buf, const Shape& in, const PoolParams& p)
{
    const Shape out = p.output_shape(in);
    check_buffer(buf.size(), in, "maxpool_insitu");
    const std::ptrdiff_t ch = in.channels;
    const std::ptrdiff_t row_stride = static_cast<std::ptrdiff_t>(in.width) * ch;
    q7_t* base = buf.data();

    // x pass: every output pixel of row y lands at pixel ox of that row.
    for (int y = 0; y < in.height; ++y) {
        q7_t* row = base + y * row_stride;
        for (int ox = 0; ox < out.width; ++ox) {
            const Window w = clip(ox, p.kernel_w, p.stride_w, p.pad_w, in.width);
            max_blocks(row + ox * ch, row + w.first * ch, ch, w.count, static_cast<std::size_t>(ch));
        }
    }
    // y pass: each element block is a whole x-pooled row.
    const std::size_t out_row = static_cast<std::size_t>(out.width) * static_cast<std::size_t>(ch);
    for (int oy = 0; oy < out.height; ++oy) {
        const Window w = clip(oy, p.kernel_h, p.stride_h, p.pad_h, in.height);
        max_blocks(base + oy * out_row, base + w.first * row_stride, row_stride, w.count, out_row);
    }
    return out;
}

void maxpool_insitu(Q7Tensor& t, const PoolParams& p)
{
    t.shrink_to(maxpool_insitu(t.data(), t.shape(), p));
}

std::size_t avgpool_scratch_size(const Shape& in, const PoolParams& p)
{
    const Shape out = p.output_shape(in);
    return static_cast<std::size_t>(p.kernel_h) * static_cast<std::size_t>(out.width) *
           static_cast<std::size_t>(out.channels);
}

Shape avgpool_insitu(std::span<q7_t> buf, const Shape& in, const PoolParams& p, std::span<std::int32_t> scratch)
{
    const Shape out = p.output_shape(in);
    check_buffer(buf.size(), in, "avgpool_insitu");
    const std::size_t ch = static_cast<std::size_t>(in.channels);
    const std::size_t row_stride = static_cast<std::size_t>(in.width) * ch;
    const std::size_t out_row = static_cast<std::size_t>(out.width) * ch;
    if (scratch.size() < static_cast<std::size_t>(p.kernel_h) * out_row) {
        throw ScratchError("avgpool_insitu: scratch smaller than kernel_h * W_out * C");
    }
    const std::int64_t divisor = p.window_area();
    q7_t* base = buf.data();

    int next_row = 0; // first input row whose x sums are not in the ring yet
    for (int oy = 0; oy < out.height; ++oy) {
        const Window wy = clip(oy, p.kernel_h, p.stride_h, p.pad_h, in.height);
        const int last = wy.first + wy.count - 1;

        for (int r = std::max(next_row, wy.first); r <= last; ++r) {
            std::int32_t* sums = scratch.data() + static_cast<std::size_t>(r % p.kernel_h) * out_row;
            const q7_t* row = base + static_cast<std::size_t>(r) * row_stride;
            for (int ox = 0; ox < out.width; ++ox) {
                const Window wx = clip(ox, p.kernel_w, p.stride_w, p.pad_w, in.width);
                std::int32_t* s = sums + static_cast<std::size_t>(ox) * ch;
                std::fill_n(s, ch, 0);
                for (int i = 0; i < wx.count; ++i) {
                    const q7_t* px = row + static_cast<std::size_t>(wx.first + i) * ch;
                    for (std::size_t c = 0; c < ch; ++c) {
                        s[c] += px[c];
                    }
                }
            }
        }
        next_row = std::max(next_row, last + 1);

        q7_t* dst = base + static_cast<std::size_t>(oy) * out_row;
        for (std::size_t j = 0; j < out_row; ++j) {
            std::int64_t total = 0;
            for (int r = wy.first; r <= last; ++r) {
                total += scratch[static_cast<std::size_t>(r % p.kernel_h) * out_row + j];
            }
            dst[j] = static_cast<q7_t>(rounded_div(total, divisor));
        }
    }
    return out;
}

void avgpool_insitu(Q7Tensor& t, const PoolParams& p)
{
    std::vector<std::int32_t> scratch(avgpool_scratch_size(t.shape(), p));
    t.shrink_to(avgpool_insitu(t.data(), t.shape(), p, scratch));
}

} // namespace qnn
