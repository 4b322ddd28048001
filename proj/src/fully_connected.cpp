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

#include "qnn/fully_connected.hpp"

#include <string>

#include "mat_mult_kernel.hpp"
#include "qnn/packed_ops.hpp"

namespace qnn {

namespace {

std::size_t checked_rows(std::size_t cols, std::size_t w_size, std::span<const q7_t> bias, std::size_t out_size,
                         const char* who)
{
    const std::size_t rows = bias.size();
    if (w_size != rows * cols) {
        throw ShapeError(std::string(who) + ": weights hold " + std::to_string(w_size) + " entries, expected " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (out_size < rows) {
        throw ShapeError(std::string(who) + ": output too small");
    }
    return rows;
}

// One output row of the basic kernel. `xr` is the input expanded with
// q7_to_q15_noreorder, i.e. [x0,x2,x1,x3] per group of four.
q31_t dot_row_noreorder(const q7_t* w, const q15_t* xr, int cols, q31_t sum)
{
    const int cols4 = cols & ~3;
    int k = 0;
    for (; k < cols4; k += 4) {
        const simd::word_t in = simd::read_q7x4(w + k);
        sum = simd::smlad(simd::sxtb16(in), simd::read_q15x2(xr + k), sum);
        sum = simd::smlad(simd::sxtb16_ror8(in), simd::read_q15x2(xr + k + 2), sum);
    }
    for (; k < cols; ++k) {
        sum = detail::mac(sum, w[k], xr[k]);
    }
    return sum;
}

} // namespace

ReorderedWeights weight_reorder_1x4(std::span<const q7_t> w, int rows, int cols)
{
    if (rows < 0 || cols < 0 || w.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw ShapeError("weight_reorder_1x4: size does not match rows*cols");
    }
    ReorderedWeights rw;
    rw.rows = rows;
    rw.cols = cols;
    rw.layout = WeightLayout::Interleaved1x4;
    rw.blob.reserve(w.size());

    auto at = [&](int r, int c) { return w[static_cast<std::size_t>(r) * cols + c]; };
    const int bands = rows / 4;
    const int groups = cols / 4;
    for (int band = 0; band < bands; ++band) {
        const int r = band * 4;
        for (int g = 0; g < groups; ++g) {
            const int c = g * 4;
            for (int half = 0; half < 2; ++half) {     // (c0,c2) then (c1,c3)
                for (int pair = 0; pair < 2; ++pair) { // rows (0,1) then (2,3)
                    const int ra = r + 2 * pair;
                    rw.blob.push_back(at(ra, c + half));
                    rw.blob.push_back(at(ra + 1, c + half));
                    rw.blob.push_back(at(ra, c + half + 2));
                    rw.blob.push_back(at(ra + 1, c + half + 2));
                }
            }
        }
        for (int c = groups * 4; c < cols; ++c) {
            for (int i = 0; i < 4; ++i) {
                rw.blob.push_back(at(r + i, c));
            }
        }
    }
    for (int r = bands * 4; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            rw.blob.push_back(at(r, c));
        }
    }
    return rw;
}

std::vector<q7_t> deinterleave_1x4(const ReorderedWeights& rw)
{
    const auto rows = static_cast<std::size_t>(rw.rows);
    const auto cols = static_cast<std::size_t>(rw.cols);
    if (rw.blob.size() != rows * cols) {
        throw ShapeError("deinterleave_1x4: blob size does not match rows*cols");
    }
    if (rw.layout == WeightLayout::RowMajor) {
        return rw.blob;
    }
    std::vector<q7_t> w(rows * cols);
    const q7_t* p = rw.blob.data();
    // Column order inside one 16-byte group, row offset inside the band.
    static constexpr int kCol[16] = {0, 0, 2, 2, 0, 0, 2, 2, 1, 1, 3, 3, 1, 1, 3, 3};
    static constexpr int kRow[16] = {0, 1, 0, 1, 2, 3, 2, 3, 0, 1, 0, 1, 2, 3, 2, 3};
    const std::size_t bands = rows / 4;
    const std::size_t cols4 = cols & ~std::size_t{3};
    for (std::size_t band = 0; band < bands; ++band) {
        const std::size_t r = band * 4;
        for (std::size_t c = 0; c < cols4; c += 4) {
            for (int i = 0; i < 16; ++i) {
                w[(r + kRow[i]) * cols + c + kCol[i]] = *p++;
            }
        }
        for (std::size_t c = cols4; c < cols; ++c) {
            for (std::size_t i = 0; i < 4; ++i) {
                w[(r + i) * cols + c] = *p++;
            }
        }
    }
    for (std::size_t r = bands * 4; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            w[r * cols + c] = *p++;
        }
    }
    return w;
}

void fully_connected_q7(std::span<const q7_t> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                        const QuantParams& q, std::span<q7_t> out, std::span<q15_t> scratch)
{
    q.validate();
    const std::size_t cols = x.size();
    const std::size_t rows = checked_rows(cols, w.size(), bias, out.size(), "fully_connected_q7");
    if (scratch.size() < fc_scratch_size(static_cast<int>(cols))) {
        throw ScratchError("fully_connected_q7: scratch smaller than input vector");
    }
    q7_to_q15_noreorder(x, scratch);

    for (std::size_t r = 0; r < rows; ++r) {
        const q31_t sum = dot_row_noreorder(w.data() + r * cols, scratch.data(), static_cast<int>(cols),
                                            detail::bias_init(bias[r], q.bias_left_shift));
        out[r] = requantize_to<q7_t>(sum, q.out_right_shift);
    }
}

std::vector<q7_t> fully_connected_q7(std::span<const q7_t> x, std::span<const q7_t> w, std::span<const q7_t> bias,
                                     const QuantParams& q)
{
    std::vector<q7_t> out(bias.size());
    std::vector<q15_t> scratch(fc_scratch_size(static_cast<int>(x.size())));
    fully_connected_q7(x, w, bias, q, out, scratch);
    return out;
}

void fully_connected_q7_opt(std::span<const q7_t> x, const ReorderedWeights& w, std::span<const q7_t> bias,
                            const QuantParams& q, std::span<q7_t> out, std::span<q15_t> scratch)
{
    q.validate();
    if (w.layout != WeightLayout::Interleaved1x4) {
        throw ParamError("fully_connected_q7_opt: weights are not in the 1x4 interleaved layout");
    }
    const int cols = static_cast<int>(x.size());
    if (w.cols != cols || w.rows != static_cast<int>(bias.size())) {
        throw ShapeError("fully_connected_q7_opt: weights are " + std::to_string(w.rows) + "x" +
                         std::to_string(w.cols) + ", input has " + std::to_string(cols) + " entries and bias " +
                         std::to_string(bias.size()));
    }
    checked_rows(x.size(), w.blob.size(), bias, out.size(), "fully_connected_q7_opt");
    if (scratch.size() < fc_scratch_size(cols)) {
        throw ScratchError("fully_connected_q7_opt: scratch smaller than input vector");
    }
    q7_to_q15_noreorder(x, scratch);
    const q15_t* xr = scratch.data();

    const int bls = q.bias_left_shift;
    const int ors = q.out_right_shift;
    const int cols4 = cols & ~3;
    const q7_t* pw = w.blob.data();
    int r = 0;
    for (; r + 3 < w.rows; r += 4) {
        q31_t sum0 = detail::bias_init(bias[r], bls);
        q31_t sum1 = detail::bias_init(bias[r + 1], bls);
        q31_t sum2 = detail::bias_init(bias[r + 2], bls);
        q31_t sum3 = detail::bias_init(bias[r + 3], bls);

        int k = 0;
        for (; k < cols4; k += 4) {
            // (x0,x2) against the first two words, (x1,x3) against the next two.
            simd::word_t v = simd::read_q15x2(xr + k);
            simd::word_t m01 = simd::read_q7x4(pw);
            simd::word_t m23 = simd::read_q7x4(pw + 4);
            sum0 = simd::smlad(simd::sxtb16(m01), v, sum0);
            sum1 = simd::smlad(simd::sxtb16_ror8(m01), v, sum1);
            sum2 = simd::smlad(simd::sxtb16(m23), v, sum2);
            sum3 = simd::smlad(simd::sxtb16_ror8(m23), v, sum3);

            v = simd::read_q15x2(xr + k + 2);
            m01 = simd::read_q7x4(pw + 8);
            m23 = simd::read_q7x4(pw + 12);
            sum0 = simd::smlad(simd::sxtb16(m01), v, sum0);
            sum1 = simd::smlad(simd::sxtb16_ror8(m01), v, sum1);
            sum2 = simd::smlad(simd::sxtb16(m23), v, sum2);
            sum3 = simd::smlad(simd::sxtb16_ror8(m23), v, sum3);
            pw += 16;
        }
        for (; k < cols; ++k) {
            const q15_t xv = xr[k];
            sum0 = detail::mac(sum0, pw[0], xv);
            sum1 = detail::mac(sum1, pw[1], xv);
            sum2 = detail::mac(sum2, pw[2], xv);
            sum3 = detail::mac(sum3, pw[3], xv);
            pw += 4;
        }
        out[r] = requantize_to<q7_t>(sum0, ors);
        out[r + 1] = requantize_to<q7_t>(sum1, ors);
        out[r + 2] = requantize_to<q7_t>(sum2, ors);
        out[r + 3] = requantize_to<q7_t>(sum3, ors);
    }
    for (; r < w.rows; ++r) {
        const q31_t sum = dot_row_noreorder(pw, xr, cols, detail::bias_init(bias[r], bls));
        out[r] = requantize_to<q7_t>(sum, ors);
        pw += cols;
    }
}

std::vector<q7_t> fully_connected_q7_opt(std::span<const q7_t> x, const ReorderedWeights& w,
                                         std::span<const q7_t> bias, const QuantParams& q)
{
    std::vector<q7_t> out(bias.size());
    std::vector<q15_t> scratch(fc_scratch_size(static_cast<int>(x.size())));
    fully_connected_q7_opt(x, w, bias, q, out, scratch);
    return out;
}

void fully_connected_mixed(std::span<const q15_t> x, std::span<const q7_t> w_swapped, std::span<const q7_t> bias,
                           const QuantParams& q, std::span<q15_t> out)
{
    q.validate();
    const std::size_t cols = x.size();
    const std::size_t rows = checked_rows(cols, w_swapped.size(), bias, out.size(), "fully_connected_mixed");
    const std::size_t cols4 = cols & ~std::size_t{3};

    for (std::size_t r = 0; r < rows; ++r) {
        const q7_t* pw = w_swapped.data() + r * cols;
        q31_t sum = detail::bias_init(bias[r], q.bias_left_shift);
        std::size_t k = 0;
        for (; k < cols4; k += 4) {
            // [w0,w2,w1,w3] expands to (w0,w1), (w2,w3) without repacking.
            const simd::word_t in = simd::read_q7x4(pw + k);
            sum = simd::smlad(simd::sxtb16(in), simd::read_q15x2(x.data() + k), sum);
            sum = simd::smlad(simd::sxtb16_ror8(in), simd::read_q15x2(x.data() + k + 2), sum);
        }
        for (; k < cols; ++k) {
            sum = detail::mac(sum, pw[k], x[k]);
        }
        out[r] = requantize_to<q15_t>(sum, q.out_right_shift);
    }
}

std::vector<q15_t> fully_connected_mixed(std::span<const q15_t> x, std::span<const q7_t> w_swapped,
                                         std::span<const q7_t> bias, const QuantParams& q)
{
    std::vector<q15_t> out(bias.size());
    fully_connected_mixed(x, w_swapped, bias, q, out);
    return out;
}

} // namespace qnn
