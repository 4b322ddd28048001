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

#include <doctest.h>

#include "qnn/convolution.hpp"
#include "qnn/reference.hpp"
#include "support/gen.hpp"

using namespace qnn;

namespace {

// Column for one output position: (ky, kx, c) order, zeros outside the image.
std::vector<q15_t> gather(const Q7Tensor& in, const ConvParams& p, int oy, int ox)
{
    std::vector<q15_t> col;
    for (int ky = 0; ky < p.kernel; ++ky) {
        for (int kx = 0; kx < p.kernel; ++kx) {
            const int y = oy * p.stride - p.pad + ky;
            const int x = ox * p.stride - p.pad + kx;
            for (int c = 0; c < in.channels(); ++c) {
                const bool inside = y >= 0 && x >= 0 && y < in.height() && x < in.width();
                col.push_back(inside ? in.at(y, x, c) : 0);
            }
        }
    }
    return col;
}

struct ConvCase {
    Q7Tensor in;
    std::vector<q7_t> w;
    std::vector<q7_t> bias;
    ConvParams p;
};

ConvCase random_conv(testing::Gen& g, int max_dim, int max_ch)
{
    ConvCase c;
    const Shape s{g.range(1, max_dim), g.range(1, max_dim), g.range(1, max_ch)};
    c.in = g.tensor(s);
    c.p = g.conv(s);
    c.p.quant = g.quant(10);
    const int out_ch = g.range(1, max_ch);
    c.w = g.q7s(static_cast<std::size_t>(c.p.kernel * c.p.kernel * s.channels * out_ch));
    c.bias = g.q7s(static_cast<std::size_t>(out_ch));
    return c;
}

} // namespace

TEST_SUITE("convolution")
{
    TEST_CASE("output dimension formula")
    {
        CHECK(conv_output_dim(32, 5, 1, 2) == 32);
        CHECK(conv_output_dim(4, 3, 2, 1) == 2);
        CHECK(conv_output_dim(2, 3, 1, 0) == 0);
        CHECK(conv_output_shape(Shape{32, 32, 3}, 5, 1, 2, 32) == Shape{32, 32, 32});
        CHECK_THROWS_AS(conv_output_shape(Shape{2, 2, 1}, 5, 1, 0, 1), ParamError);
    }

    TEST_CASE("im2col: 4x4x1 with K3 S2 P1 zero-fills the border")
    {
        Q7Tensor in(Shape{4, 4, 1}, 7);
        for (int i = 0; i < 16; ++i) {
            in.storage()[static_cast<std::size_t>(i)] = static_cast<q7_t>(i + 1);
        }
        ConvParams p;
        p.kernel = 3;
        p.stride = 2;
        p.pad = 1;
        std::vector<q15_t> cols(18);
        im2col_partial(in, p, cols, 0, 2);
        // patch (0,0): top row and left column are padding
        const std::vector<q15_t> first{0, 0, 0, 0, 1, 2, 0, 5, 6};
        CHECK(std::vector<q15_t>(cols.begin(), cols.begin() + 9) == first);
        const std::vector<q15_t> second{0, 0, 0, 2, 3, 4, 6, 7, 8};
        CHECK(std::vector<q15_t>(cols.begin() + 9, cols.end()) == second);
        im2col_partial(in, p, cols, 2, 2);
        const std::vector<q15_t> last{6, 7, 8, 10, 11, 12, 14, 15, 16};
        CHECK(std::vector<q15_t>(cols.begin() + 9, cols.end()) == last);
    }

    TEST_CASE("im2col: zero input and K=1")
    {
        ConvParams p;
        p.kernel = 1;
        Q7Tensor zero(Shape{3, 3, 2}, 7);
        std::vector<q15_t> cols(4, 99);
        im2col_partial(zero, p, cols, 4, 2);
        CHECK(cols == std::vector<q15_t>(4, 0));

        testing::Gen g(51);
        const auto t = g.tensor(Shape{3, 3, 2});
        im2col_partial(t, p, cols, 3, 2);
        CHECK(cols[0] == t.at(1, 0, 0));
        CHECK(cols[1] == t.at(1, 0, 1));
        CHECK(cols[2] == t.at(1, 1, 0));
        CHECK(cols[3] == t.at(1, 1, 1));
    }

    TEST_CASE("im2col equals the gather model")
    {
        testing::Gen g(52);
        for (int i = 0; i < 500; ++i) {
            const Shape s{g.range(1, 9), g.range(1, 9), g.range(1, 4)};
            const auto in = g.tensor(s);
            ConvParams p = g.conv(s);
            p.partial_cols = g.pick({2, 4, 6});
            const Shape out = conv_output_shape(s, p.kernel, p.stride, p.pad, 1);
            const int patches = out.height * out.width;
            const int start = g.range(0, patches - 1);
            const int n = std::min(g.range(1, p.partial_cols), patches - start);
            const std::size_t len = static_cast<std::size_t>(p.kernel * p.kernel * s.channels);
            std::vector<q15_t> cols(len * static_cast<std::size_t>(n));
            im2col_partial(in, p, cols, start, n);
            for (int k = 0; k < n; ++k) {
                const int patch = start + k;
                const auto expect = gather(in, p, patch / out.width, patch % out.width);
                REQUIRE(std::equal(expect.begin(), expect.end(), cols.begin() + static_cast<std::ptrdiff_t>(k * len)));
            }
        }
    }

    TEST_CASE("im2col rejects bad ranges and small buffers")
    {
        const Q7Tensor in(Shape{4, 4, 1}, 7);
        ConvParams p;
        p.kernel = 3;
        p.pad = 1;
        std::vector<q15_t> cols(18);
        CHECK_THROWS_AS(im2col_partial(in, p, cols, 15, 2), ParamError);
        CHECK_THROWS_AS(im2col_partial(in, p, cols, 0, 3), ParamError);
        CHECK_THROWS_AS(im2col_partial(in, p, cols, -1, 1), ParamError);
        std::vector<q15_t> small(10);
        CHECK_THROWS_AS(im2col_partial(in, p, small, 0, 2), ScratchError);
        p.partial_cols = 3;
        CHECK_THROWS_AS(im2col_partial(in, p, cols, 0, 2), ParamError);
    }

    TEST_CASE("conv: K=1 identity weights copy the input")
    {
        testing::Gen g(53);
        const auto in = g.tensor(Shape{5, 6, 3});
        std::vector<q7_t> w(9, 0);
        w[0] = w[4] = w[8] = 1;
        ConvParams p;
        const auto out = conv_hwc_q7(in, w, std::vector<q7_t>(3, 0), p, 7);
        CHECK(out.shape() == in.shape());
        CHECK(out.storage() == in.storage());
    }

    TEST_CASE("conv: first layer of the CIFAR-10 network keeps 32x32 and yields 32 channels")
    {
        testing::Gen g(54);
        const auto in = g.tensor(Shape{32, 32, 3});
        ConvParams p;
        p.kernel = 5;
        p.pad = 2;
        p.quant = QuantParams{6, 9};
        const auto w = g.q7s(5 * 5 * 3 * 32);
        const auto bias = g.q7s(32);
        const auto out = conv_hwc_q7(in, w, bias, p, 7);
        CHECK(out.shape() == Shape{32, 32, 32});
        CHECK(out == ref::conv(in, w, bias, 5, 1, 2, p.quant, 7));
        CHECK(conv_scratch_size(in.shape(), p) * sizeof(q15_t) == 300);
    }

    TEST_CASE("conv: random instances equal the oracle")
    {
        testing::Gen g(55);
        for (int i = 0; i < 1000; ++i) {
            const auto c = random_conv(g, 10, 6);
            INFO("in=" << c.in.shape().str() << " K=" << c.p.kernel << " S=" << c.p.stride << " P=" << c.p.pad);
            REQUIRE(conv_hwc_q7(c.in, c.w, c.bias, c.p, 7) ==
                    ref::conv(c.in, c.w, c.bias, c.p.kernel, c.p.stride, c.p.pad, c.p.quant, 7));
        }
    }

    TEST_CASE("conv: the column batch size does not change the result")
    {
        testing::Gen g(56);
        for (int i = 0; i < 200; ++i) {
            auto c = random_conv(g, 9, 4);
            const auto base = conv_hwc_q7(c.in, c.w, c.bias, c.p, 7);
            const Shape out = conv_output_shape(c.in.shape(), c.p.kernel, c.p.stride, c.p.pad, 1);
            c.p.partial_cols = (out.height * out.width + 1) & ~1;
            REQUIRE(conv_hwc_q7(c.in, c.w, c.bias, c.p, 7) == base);
            c.p.partial_cols = 4;
            REQUIRE(conv_hwc_q7(c.in, c.w, c.bias, c.p, 7) == base);
        }
    }

    TEST_CASE("conv: zero weights leave the requantized bias")
    {
        testing::Gen g(57);
        const auto in = g.tensor(Shape{4, 4, 2});
        ConvParams p;
        p.kernel = 3;
        p.pad = 1;
        p.quant = QuantParams{2, 1};
        const std::vector<q7_t> bias{3, -5};
        const auto out = conv_hwc_q7(in, std::vector<q7_t>(36, 0), bias, p, 7);
        for (int y = 0; y < 4; ++y) {
            for (int x = 0; x < 4; ++x) {
                CHECK(out.at(y, x, 0) == 6);
                CHECK(out.at(y, x, 1) == -10);
            }
        }
    }

    TEST_CASE("conv: shape and scratch errors")
    {
        const Q7Tensor in(Shape{4, 4, 2}, 7);
        ConvParams p;
        p.kernel = 3;
        const std::vector<q7_t> bias(2);
        CHECK_THROWS_AS(conv_hwc_q7(in, std::vector<q7_t>(35), bias, p, 7), ShapeError);
        std::vector<q15_t> scratch(10);
        std::vector<q7_t> out(8);
        CHECK_THROWS_AS(conv_hwc_q7(in.data(), in.shape(), std::vector<q7_t>(36), bias, p, scratch, out),
                        ScratchError);
        std::vector<q15_t> enough(36);
        std::vector<q7_t> small(7);
        CHECK_THROWS_AS(conv_hwc_q7(in.data(), in.shape(), std::vector<q7_t>(36), bias, p, enough, small),
                        ShapeError);
        p.kernel = 0;
        CHECK_THROWS_AS(conv_hwc_q7(in, std::vector<q7_t>(0), bias, p, 7), ParamError);
    }

    TEST_CASE("depthwise: unit center tap copies the input")
    {
        testing::Gen g(58);
        const auto in = g.tensor(Shape{5, 5, 4});
        ConvParams p;
        p.kernel = 3;
        p.pad = 1;
        std::vector<q7_t> w(9 * 4, 0);
        for (int c = 0; c < 4; ++c) {
            w[static_cast<std::size_t>(4 * 4 + c)] = 1; // tap (1,1)
        }
        CHECK(depthwise_conv_hwc_q7(in, w, std::vector<q7_t>(4, 0), p, 7).storage() == in.storage());
    }

    TEST_CASE("depthwise: random instances equal the oracle")
    {
        testing::Gen g(59);
        for (int i = 0; i < 1000; ++i) {
            const Shape s{g.range(1, 10), g.range(1, 10), g.range(1, 8)};
            const auto in = g.tensor(s);
            ConvParams p = g.conv(s);
            p.quant = g.quant(10);
            const auto w = g.q7s(static_cast<std::size_t>(p.kernel * p.kernel * s.channels));
            const auto bias = g.q7s(static_cast<std::size_t>(s.channels));
            INFO("in=" << s.str() << " K=" << p.kernel << " S=" << p.stride << " P=" << p.pad);
            REQUIRE(depthwise_conv_hwc_q7(in, w, bias, p, 7) ==
                    ref::depthwise_conv(in, w, bias, p.kernel, p.stride, p.pad, p.quant, 7));
        }
    }

    TEST_CASE("depthwise: changing one channel leaves the others alone")
    {
        testing::Gen g(60);
        for (int i = 0; i < 200; ++i) {
            const Shape s{g.range(2, 8), g.range(2, 8), g.range(2, 6)};
            auto in = g.tensor(s);
            ConvParams p = g.conv(s);
            p.quant = g.quant(8);
            const auto w = g.q7s(static_cast<std::size_t>(p.kernel * p.kernel * s.channels));
            const auto bias = g.q7s(static_cast<std::size_t>(s.channels));
            const auto before = depthwise_conv_hwc_q7(in, w, bias, p, 7);
            const int victim = g.range(0, s.channels - 1);
            for (int y = 0; y < s.height; ++y) {
                for (int x = 0; x < s.width; ++x) {
                    in.at(y, x, victim) = static_cast<q7_t>(g.range(-128, 127));
                }
            }
            const auto after = depthwise_conv_hwc_q7(in, w, bias, p, 7);
            for (int y = 0; y < before.height(); ++y) {
                for (int x = 0; x < before.width(); ++x) {
                    for (int c = 0; c < s.channels; ++c) {
                        if (c != victim) {
                            REQUIRE(before.at(y, x, c) == after.at(y, x, c));
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("depthwise: errors")
    {
        const Q7Tensor in(Shape{4, 4, 2}, 7);
        ConvParams p;
        p.kernel = 3;
        CHECK_THROWS_AS(depthwise_conv_hwc_q7(in, std::vector<q7_t>(18), std::vector<q7_t>(3), p, 7), ShapeError);
        CHECK_THROWS_AS(depthwise_conv_hwc_q7(in, std::vector<q7_t>(17), std::vector<q7_t>(2), p, 7), ShapeError);
        std::vector<q15_t> scratch(3);
        std::vector<q7_t> out(8);
        CHECK_THROWS_AS(depthwise_conv_hwc_q7(in.data(), in.shape(), std::vector<q7_t>(18), std::vector<q7_t>(2), p,
                                              scratch, out),
                        ScratchError);
    }
}
