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

#include <numeric>

#include "qnn/fully_connected.hpp"
#include "qnn/reference.hpp"
#include "support/gen.hpp"

using namespace qnn;

namespace {

std::vector<q7_t> identity(int n, int one = 1)
{
    std::vector<q7_t> w(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i * n + i)] = static_cast<q7_t>(one);
    }
    return w;
}

struct FcCase {
    int rows;
    int cols;
    std::vector<q7_t> x;
    std::vector<q7_t> w;
    std::vector<q7_t> bias;
    QuantParams q;
};

FcCase random_case(testing::Gen& g, int rows, int cols)
{
    return {rows, cols, g.q7s(static_cast<std::size_t>(cols)), g.q7s(static_cast<std::size_t>(rows * cols)),
            g.q7s(static_cast<std::size_t>(rows)), g.quant(10)};
}

} // namespace

TEST_SUITE("fully connected")
{
    TEST_CASE("basic: identity weights return the input")
    {
        const std::vector<q7_t> x{5, -3, 127, -128, 0, 9};
        const std::vector<q7_t> bias(6, 0);
        CHECK(fully_connected_q7(x, identity(6), bias, QuantParams{}) == x);
    }

    TEST_CASE("basic: zero input leaves the requantized bias")
    {
        const std::vector<q7_t> x(7, 0);
        const std::vector<q7_t> w(21, 55);
        const std::vector<q7_t> bias{10, -20, 127};
        CHECK(fully_connected_q7(x, w, bias, QuantParams{3, 2}) == std::vector<q7_t>{20, -40, 127});
    }

    TEST_CASE("basic: random 10x64 equals the oracle")
    {
        testing::Gen g(41);
        for (int i = 0; i < 100; ++i) {
            const auto c = random_case(g, 10, 64);
            REQUIRE(fully_connected_q7(c.x, c.w, c.bias, c.q) ==
                    ref::fully_connected<q7_t, q7_t>(c.x, c.w, c.bias, c.q));
        }
    }

    TEST_CASE("basic: random shapes equal the oracle")
    {
        testing::Gen g(42);
        for (int i = 0; i < 1000; ++i) {
            const auto c = random_case(g, g.range(1, 16), g.range(1, 40));
            INFO("rows=" << c.rows << " cols=" << c.cols);
            REQUIRE(fully_connected_q7(c.x, c.w, c.bias, c.q) ==
                    ref::fully_connected<q7_t, q7_t>(c.x, c.w, c.bias, c.q));
        }
    }

    TEST_CASE("basic: shape and scratch errors")
    {
        const std::vector<q7_t> x(4);
        const std::vector<q7_t> bias(2);
        CHECK_THROWS_AS(fully_connected_q7(x, std::vector<q7_t>(7), bias, QuantParams{}), ShapeError);
        std::vector<q7_t> out(2);
        std::vector<q15_t> scratch(3);
        CHECK_THROWS_AS(fully_connected_q7(x, std::vector<q7_t>(8), bias, QuantParams{}, out, scratch), ScratchError);
        std::vector<q7_t> small(1);
        std::vector<q15_t> enough(4);
        CHECK_THROWS_AS(fully_connected_q7(x, std::vector<q7_t>(8), bias, QuantParams{}, small, enough), ShapeError);
    }

    TEST_CASE("1x4 reorder: leftover rows stay row-major")
    {
        const std::vector<q7_t> w{1, 2, 3, 4};
        const auto rw = weight_reorder_1x4(w, 1, 4);
        CHECK(rw.layout == WeightLayout::Interleaved1x4);
        CHECK(rw.blob == w);
        CHECK(rw.leftover_rows() == 1);
        CHECK(rw.leftover_cols() == 0);
    }

    TEST_CASE("1x4 reorder: a 4x4 band is interleaved pairwise by rows")
    {
        std::vector<q7_t> w(16);
        std::iota(w.begin(), w.end(), 0); // w[r][c] = 4r + c
        const auto rw = weight_reorder_1x4(w, 4, 4);
        // r0c0 r1c0 r0c2 r1c2 | r2c0 r3c0 r2c2 r3c2 | r0c1 r1c1 r0c3 r1c3 | r2c1 r3c1 r2c3 r3c3
        const std::vector<q7_t> expect{0, 4, 2, 6, 8, 12, 10, 14, 1, 5, 3, 7, 9, 13, 11, 15};
        CHECK(rw.blob == expect);
    }

    TEST_CASE("1x4 reorder: constant matrices are unchanged")
    {
        const std::vector<q7_t> w(16, 9);
        CHECK(weight_reorder_1x4(w, 4, 4).blob == w);
    }

    TEST_CASE("1x4 reorder: leftover columns are interleaved by row without shuffling")
    {
        std::vector<q7_t> w(4 * 6);
        std::iota(w.begin(), w.end(), 0); // w[r][c] = 6r + c
        const auto rw = weight_reorder_1x4(w, 4, 6);
        // after the 16-byte group: column 4 then column 5, rows 0..3
        const std::vector<q7_t> tail(rw.blob.begin() + 16, rw.blob.end());
        CHECK(tail == std::vector<q7_t>{4, 10, 16, 22, 5, 11, 17, 23});
    }

    TEST_CASE("1x4 reorder: deinterleave inverts it for every shape")
    {
        testing::Gen g(43);
        for (int rows = 0; rows <= 13; ++rows) {
            for (int cols = 0; cols <= 13; ++cols) {
                const auto w = g.q7s(static_cast<std::size_t>(rows * cols));
                const auto rw = weight_reorder_1x4(w, rows, cols);
                REQUIRE(rw.blob.size() == w.size());
                REQUIRE(deinterleave_1x4(rw) == w);
            }
        }
        const auto w = g.q7s(90);
        CHECK(deinterleave_1x4(weight_reorder_1x4(w, 9, 10)) == w);
        CHECK_THROWS_AS(weight_reorder_1x4(w, 9, 9), ShapeError);
    }

    TEST_CASE("opt kernel: fixed shapes with leftovers")
    {
        testing::Gen g(44);
        auto c = random_case(g, 6, 10);
        CHECK(fully_connected_q7_opt(c.x, weight_reorder_1x4(c.w, 6, 10), c.bias, c.q) ==
              fully_connected_q7(c.x, c.w, c.bias, c.q));

        c = random_case(g, 4, 8);
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            c.x[i] = static_cast<q7_t>(i % 2 == 0 ? 1 : -1);
        }
        CHECK(fully_connected_q7_opt(c.x, weight_reorder_1x4(c.w, 4, 8), c.bias, c.q) ==
              fully_connected_q7(c.x, c.w, c.bias, c.q));
    }

    TEST_CASE("opt kernel equals basic for all 16 row/column residues")
    {
        testing::Gen g(45);
        for (int rr = 0; rr < 4; ++rr) {
            for (int cr = 0; cr < 4; ++cr) {
                for (int rep = 0; rep < 100; ++rep) {
                    const int rows = 4 * g.range(0, 4) + rr;
                    const int cols = 4 * g.range(0, 6) + cr;
                    if (rows == 0) {
                        continue;
                    }
                    const auto c = random_case(g, rows, cols);
                    INFO("rows=" << rows << " cols=" << cols);
                    const auto basic = fully_connected_q7(c.x, c.w, c.bias, c.q);
                    REQUIRE(fully_connected_q7_opt(c.x, weight_reorder_1x4(c.w, rows, cols), c.bias, c.q) == basic);
                    REQUIRE(basic == ref::fully_connected<q7_t, q7_t>(c.x, c.w, c.bias, c.q));
                }
            }
        }
    }

    TEST_CASE("opt kernel rejects row-major weights")
    {
        ReorderedWeights rw;
        rw.rows = 2;
        rw.cols = 2;
        rw.layout = WeightLayout::RowMajor;
        rw.blob.assign(4, 1);
        const std::vector<q7_t> x(2);
        const std::vector<q7_t> bias(2);
        CHECK_THROWS_AS(fully_connected_q7_opt(x, rw, bias, QuantParams{}), ParamError);
        rw.layout = WeightLayout::Interleaved1x4;
        CHECK_THROWS_AS(fully_connected_q7_opt(std::vector<q7_t>(3), rw, bias, QuantParams{}), ShapeError);
    }

    TEST_CASE("mixed: identity weights return the input")
    {
        const std::vector<q15_t> x{1000, -32768, 32767, 5, -7};
        const std::vector<q7_t> bias(5, 0);
        const auto w = weight_byteswap_preprocess_rows(identity(5), 5, 5);
        CHECK(fully_connected_mixed(x, w, bias, QuantParams{}) == x);
    }

    TEST_CASE("mixed: zero input leaves the bias path")
    {
        const std::vector<q15_t> x(12, 0);
        const std::vector<q7_t> w(96, -3);
        const std::vector<q7_t> bias{1, 2, 3, 4, 5, 6, 7, -128};
        const auto out = fully_connected_mixed(x, w, bias, QuantParams{8, 0});
        CHECK(out == std::vector<q15_t>{256, 512, 768, 1024, 1280, 1536, 1792, -32768});
    }

    TEST_CASE("mixed: random instances equal the oracle on the original weights")
    {
        testing::Gen g(46);
        for (int i = 0; i < 1000; ++i) {
            const int rows = i == 0 ? 8 : g.range(1, 16);
            const int cols = i == 0 ? 12 : g.range(1, 40);
            const auto x = g.q15s(static_cast<std::size_t>(cols));
            const auto w = g.q7s(static_cast<std::size_t>(rows * cols));
            const auto bias = g.q7s(static_cast<std::size_t>(rows));
            const QuantParams q = g.quant(16);
            INFO("rows=" << rows << " cols=" << cols);
            REQUIRE(fully_connected_mixed(x, weight_byteswap_preprocess_rows(w, rows, cols), bias, q) ==
                    ref::fully_connected<q15_t, q15_t>(x, w, bias, q));
        }
    }
}
