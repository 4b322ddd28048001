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

#include "qnn/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qnn::ref {

namespace {

std::int64_t checked(std::int64_t acc, const char* who)
{
    if (acc < std::numeric_limits<q31_t>::min() || acc > std::numeric_limits<q31_t>::max()) {
        throw AccumulatorOverflow(std::string(who) + ": accumulator " + std::to_string(acc) +
                                  " outside the q31 range");
    }
    return acc;
}

std::int64_t bias_term(std::int64_t bias, int bias_left_shift)
{
    return bias * (std::int64_t{1} << bias_left_shift);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

int out_dim(int n, int k, int s, int p)
{
    const int span = n + 2 * p - k;
    return span < 0 ? 0 : span / s + 1;
}

} // namespace

template <class Out>
std::vector<Out> matmul(std::span<const q15_t> a, std::span<const q15_t> b_cols, std::span<const q31_t> bias,
                        int rows, int inner, int cols, const QuantParams& q)
{
    if (a.size() != static_cast<std::size_t>(rows) * inner || b_cols.size() != static_cast<std::size_t>(inner) * cols ||
        bias.size() != static_cast<std::size_t>(rows)) {
        throw ShapeError("ref::matmul: operand sizes do not match");
    }
    std::vector<Out> out(static_cast<std::size_t>(rows) * cols);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            std::int64_t acc = bias_term(bias[r], q.bias_left_shift);
            for (int k = 0; k < inner; ++k) {
                acc += std::int64_t{a[static_cast<std::size_t>(r) * inner + k]} *
                       b_cols[static_cast<std::size_t>(c) * inner + k];
            }
            out[static_cast<std::size_t>(c) * rows + r] =
                requantize_to<Out>(checked(acc, "ref::matmul"), q.out_right_shift);
        }
    }
    return out;
}

template <class In, class Out>
std::vector<Out> fully_connected(std::span<const In> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                                 const QuantParams& q)
{
    const std::size_t rows = bias.size();
    const std::size_t cols = x.size();
    if (w.size() != rows * cols) {
        throw ShapeError("ref::fully_connected: weights do not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    std::vector<Out> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        std::int64_t acc = bias_term(bias[r], q.bias_left_shift);
        for (std::size_t k = 0; k < cols; ++k) {
            acc += std::int64_t{w[r * cols + k]} * x[k];
        }
        out[r] = requantize_to<Out>(checked(acc, "ref::fully_connected"), q.out_right_shift);
    }
    return out;
}

Q7Tensor conv(const Q7Tensor& in, std::span<const q7_t> weights, std::span<const q7_t> bias, int kernel, int stride,
              int pad, const QuantParams& q, int out_frac_bits)
{
    const int cin = in.channels();
    const int cout = static_cast<int>(bias.size());
    const int oh = out_dim(in.height(), kernel, stride, pad);
    const int ow = out_dim(in.width(), kernel, stride, pad);
    if (oh < 1 || ow < 1 || cout < 1) {
        throw ParamError("ref::conv: empty output");
    }
    if (weights.size() != static_cast<std::size_t>(cout) * kernel * kernel * cin) {
        throw ShapeError("ref::conv: weight count mismatch");
    }
    Q7Tensor out(Shape{oh, ow, cout}, out_frac_bits);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            for (int f = 0; f < cout; ++f) {
                std::int64_t acc = bias_term(bias[f], q.bias_left_shift);
                for (int ky = 0; ky < kernel; ++ky) {
                    for (int kx = 0; kx < kernel; ++kx) {
                        const int iy = oy * stride + ky - pad;
                        const int ix = ox * stride + kx - pad;
                        if (iy < 0 || iy >= in.height() || ix < 0 || ix >= in.width()) {
                            continue;
                        }
                        for (int c = 0; c < cin; ++c) {
                            const std::size_t wi = ((static_cast<std::size_t>(f) * kernel + ky) * kernel + kx) * cin + c;
                            acc += std::int64_t{weights[wi]} * in.at(iy, ix, c);
                        }
                    }
                }
                out.at(oy, ox, f) = requantize_to<q7_t>(checked(acc, "ref::conv"), q.out_right_shift);
            }
        }
    }
    return out;
}

Q7Tensor depthwise_conv(const Q7Tensor& in, std::span<const q7_t> weights, std::span<const q7_t> bias, int kernel,
                        int stride, int pad, const QuantParams& q, int out_frac_bits)
{
    const int ch = in.channels();
    const int oh = out_dim(in.height(), kernel, stride, pad);
    const int ow = out_dim(in.width(), kernel, stride, pad);
    if (oh < 1 || ow < 1) {
        throw ParamError("ref::depthwise_conv: empty output");
    }
    if (bias.size() != static_cast<std::size_t>(ch) ||
        weights.size() != static_cast<std::size_t>(kernel) * kernel * ch) {
        throw ShapeError("ref::depthwise_conv: weight or bias count mismatch");
    }
    Q7Tensor out(Shape{oh, ow, ch}, out_frac_bits);
    for (int c = 0; c < ch; ++c) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                std::int64_t acc = bias_term(bias[c], q.bias_left_shift);
                for (int ky = 0; ky < kernel; ++ky) {
                    for (int kx = 0; kx < kernel; ++kx) {
                        const int iy = oy * stride + ky - pad;
                        const int ix = ox * stride + kx - pad;
                        if (iy >= 0 && iy < in.height() && ix >= 0 && ix < in.width()) {
                            acc += std::int64_t{weights[(static_cast<std::size_t>(ky) * kernel + kx) * ch + c]} *
                                   in.at(iy, ix, c);
                        }
                    }
                }
                out.at(oy, ox, c) = requantize_to<q7_t>(checked(acc, "ref::depthwise_conv"), q.out_right_shift);
            }
        }
    }
    return out;
}

Q7Tensor pool_window(const Q7Tensor& in, const PoolParams& p, PoolKind kind)
{
    if (p.kernel_h < 1 || p.kernel_w < 1 || p.stride_h < 1 || p.stride_w < 1 || p.pad_h < 0 || p.pad_w < 0 ||
        p.pad_h >= p.kernel_h || p.pad_w >= p.kernel_w) {
        throw ParamError("ref::pool_window: invalid window geometry");
    }
    const int oh = out_dim(in.height(), p.kernel_h, p.stride_h, p.pad_h);
    const int ow = out_dim(in.width(), p.kernel_w, p.stride_w, p.pad_w);
    if (oh < 1 || ow < 1) {
        throw ParamError("ref::pool_window: empty output");
    }
    Q7Tensor out(Shape{oh, ow, in.channels()}, in.frac_bits());
    const double area = static_cast<double>(p.kernel_h) * p.kernel_w;
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            for (int c = 0; c < in.channels(); ++c) {
                int best = std::numeric_limits<int>::min();
                long sum = 0;
                for (int ky = 0; ky < p.kernel_h; ++ky) {
                    for (int kx = 0; kx < p.kernel_w; ++kx) {
                        const int iy = oy * p.stride_h + ky - p.pad_h;
                        const int ix = ox * p.stride_w + kx - p.pad_w;
                        if (iy < 0 || iy >= in.height() || ix < 0 || ix >= in.width()) {
                            continue;
                        }
                        best = std::max<int>(best, in.at(iy, ix, c));
                        sum += in.at(iy, ix, c);
                    }
                }
                out.at(oy, ox, c) = static_cast<q7_t>(
                    kind == PoolKind::Max ? best : static_cast<int>(std::round(static_cast<double>(sum) / area)));
            }
        }
    }
    return out;
}

std::vector<q7_t> relu(std::span<const q7_t> x)
{
    std::vector<q7_t> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] < 0 ? q7_t{0} : x[i];
    }
    return out;
}

template <class In, class Out>
std::vector<Out> lut(std::span<const In> x, int in_frac_bits, const LutTable& t, bool interpolate)
{
    const int native = 15 - t.range_pow;
    if (in_frac_bits < 0 || in_frac_bits > native) {
        throw ParamError("ref::lut: input format incompatible with table");
    }
    if (t.elem_width != 8 * static_cast<int>(sizeof(Out))) {
        throw ParamError("ref::lut: output width does not match table");
    }
    const int fine_n = t.fine_entries();
    const int coarse_n = t.coarse_entries();
    std::vector<Out> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        // x in units of 2^-native, limited to the table's span [-R, R).
        std::int64_t v = std::int64_t{x[i]} * (std::int64_t{1} << (native - in_frac_bits));
        v = std::clamp<std::int64_t>(v, -32768, 32767);

        // Table coordinate t = num / den, measured in entries from the table start.
        std::span<const q15_t> table;
        std::int64_t num = 0;
        std::int64_t den = 0;
        if (t.mode == LutMode::TwoRegion && v >= -8192 && v < 8192) {
            table = t.fine();
            num = (v + 8192) * fine_n;
            den = 16384;
        } else {
            table = t.coarse();
            num = (v + 32768) * coarse_n;
            den = 65536;
        }
        const auto last = static_cast<std::int64_t>(table.size()) - 1;
        std::int64_t y = 0;
        if (!interpolate) {
            y = table[static_cast<std::size_t>(std::min(floor_div(2 * num + den, 2 * den), last))];
        } else {
            const std::int64_t idx = floor_div(num, den);
            const std::int64_t rem = num - idx * den;
            const std::int64_t y0 = table[static_cast<std::size_t>(idx)];
            const std::int64_t y1 = table[static_cast<std::size_t>(std::min(idx + 1, last))];
            y = y0 + floor_div(2 * (y1 - y0) * rem + den, 2 * den);
        }
        out[i] = static_cast<Out>(y);
    }
    return out;
}

double activation(LutFunc f, double x) noexcept
{
    if (f == LutFunc::Sigmoid) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    return std::tanh(x);
}

template std::vector<q7_t> matmul<q7_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>, int,
                                        int, int, const QuantParams&);
template std::vector<q15_t> matmul<q15_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>,
                                          int, int, int, const QuantParams&);
template std::vector<q7_t> fully_connected<q7_t, q7_t>(std::span<const q7_t>, std::span<const q7_t>,
                                                       std::span<const q7_t>, const QuantParams&);
template std::vector<q15_t> fully_connected<q15_t, q15_t>(std::span<const q15_t>, std::span<const q7_t>,
                                                          std::span<const q7_t>, const QuantParams&);
template std::vector<q7_t> lut<q7_t, q7_t>(std::span<const q7_t>, int, const LutTable&, bool);
template std::vector<q7_t> lut<q15_t, q7_t>(std::span<const q15_t>, int, const LutTable&, bool);
template std::vector<q15_t> lut<q7_t, q15_t>(std::span<const q7_t>, int, const LutTable&, bool);
template std::vector<q15_t> lut<q15_t, q15_t>(std::span<const q15_t>, int, const LutTable&, bool);

} // namespace qnn::ref
