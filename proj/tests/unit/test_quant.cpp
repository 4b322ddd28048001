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

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnn/packed_ops.hpp"
#include "qnn/quant.hpp"
#include "support/gen.hpp"

using namespace qnn;

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if (a % b != 0 && (a < 0) != (b < 0)) {
        --q;
    }
    return q;
}

// Rounded shift computed by division, saturated.
std::int64_t requantize_model(std::int64_t acc, int shift, int width)
{
    const std::int64_t scaled = shift == 0 ? acc : floor_div(acc + (std::int64_t{1} << (shift - 1)), std::int64_t{1} << shift);
    return std::clamp(scaled, qmin(width), qmax(width));
}

std::vector<q7_t> v7(std::initializer_list<int> xs)
{
    std::vector<q7_t> v;
    for (int x : xs) {
        v.push_back(static_cast<q7_t>(x));
    }
    return v;
}

std::vector<q15_t> v15(std::initializer_list<int> xs)
{
    std::vector<q15_t> v;
    for (int x : xs) {
        v.push_back(static_cast<q15_t>(x));
    }
    return v;
}

} // namespace

TEST_SUITE("quant")
{
    TEST_CASE("quantize_real examples")
    {
        CHECK(quantize_real(0.5, 7, 8).value == 64);
        CHECK(quantize_real(1.0, 7, 8).value == 127);
        // sigmoid(8) printed to four places
        CHECK(quantize_real(0.9997, 7, 8).value == 127);
        CHECK(std::abs(1.0 / (1.0 + std::exp(-8.0)) - 0.9997) < 5e-5);
        CHECK(quantize_real(-1.0, 7, 8).value == -128);
        CHECK(quantize_real(-3.0, 7, 8).value == -128);
        CHECK(quantize_real(0.25, 15, 16).value == 8192);
    }

    TEST_CASE("quantize_real rounds ties away from zero")
    {
        CHECK(quantize_real(0.5 / 128.0, 7, 8).value == 1);
        CHECK(quantize_real(-0.5 / 128.0, 7, 8).value == -1);
        CHECK(quantize_real(1.5 / 128.0, 7, 8).value == 2);
        CHECK(quantize_real(-2.5 / 128.0, 7, 8).value == -3);
    }

    TEST_CASE("quantize_real rejects bad formats")
    {
        CHECK_THROWS_AS(quantize_real(0.0, 8, 8), ParamError);
        CHECK_THROWS_AS(quantize_real(0.0, -1, 8), ParamError);
        CHECK_THROWS_AS(quantize_real(0.0, 3, 12), ParamError);
    }

    TEST_CASE("quantize_real inverts dequantize on representable values")
    {
        for (int frac = 0; frac <= 7; ++frac) {
            for (int v = -128; v < 128; ++v) {
                REQUIRE(quantize_real(dequantize(v, frac), frac, 8).value == v);
            }
        }
        testing::Gen g(21);
        for (int i = 0; i < 20000; ++i) {
            const int frac = g.range(0, 15);
            const int v = g.range(-32768, 32767);
            REQUIRE(quantize_real(dequantize(v, frac), frac, 16).value == v);
        }
    }

    TEST_CASE("QScalar::real")
    {
        CHECK(QScalar{64, 7, 8}.real() == doctest::Approx(0.5));
        CHECK(QScalar{-3, 1, 8}.real() == doctest::Approx(-1.5));
    }

    TEST_CASE("requantize examples")
    {
        for (int k = 0; k < 31; ++k) {
            CHECK(requantize(0, k, 8) == 0);
        }
        CHECK(requantize(255, 4, 8) == 16);
        CHECK(requantize(100000, 4, 8) == 127);
        CHECK(requantize(-8, 4, 8) == 0);
        CHECK(requantize(-9, 4, 8) == -1);
        CHECK(requantize(8, 4, 8) == 1);
    }

    TEST_CASE("requantize with shift 0 saturates only")
    {
        testing::Gen g(22);
        for (int i = 0; i < 100000; ++i) {
            const auto a = static_cast<q31_t>(g.word());
            REQUIRE(requantize(a, 0, 8) == simd::ssat_q7(a));
            REQUIRE(requantize(a, 0, 16) == simd::ssat_q15(a));
        }
    }

    TEST_CASE("requantize matches the division model")
    {
        testing::Gen g(23);
        for (int i = 0; i < 200000; ++i) {
            const auto a = static_cast<q31_t>(g.word()) >> g.range(0, 24);
            const int s = g.range(0, 31);
            const int w = g.coin() ? 8 : 16;
            REQUIRE(requantize(a, s, w) == requantize_model(a, s, w));
        }
        for (q31_t a : {std::numeric_limits<q31_t>::min(), std::numeric_limits<q31_t>::max(), -1, 1}) {
            for (int s = 0; s <= 31; ++s) {
                REQUIRE(requantize(a, s, 16) == requantize_model(a, s, 16));
            }
        }
    }

    TEST_CASE("requantize is monotone in the accumulator")
    {
        testing::Gen g(24);
        for (int i = 0; i < 100000; ++i) {
            auto a = static_cast<q31_t>(g.word());
            auto b = static_cast<q31_t>(g.word());
            if (a > b) {
                std::swap(a, b);
            }
            const int s = g.range(0, 20);
            REQUIRE(requantize(a, s, 8) <= requantize(b, s, 8));
        }
    }

    TEST_CASE("QuantParams validation and consistency")
    {
        CHECK_NOTHROW((QuantParams{0, 31}).validate());
        CHECK_THROWS_AS((QuantParams{32, 0}).validate(), ParamError);
        CHECK_THROWS_AS((QuantParams{0, -1}).validate(), ParamError);
        // in 7 + weight 7 = bias 8 + 6 = out 5 + 9
        CHECK(QuantParams{6, 9}.consistent(7, 7, 8, 5));
        CHECK_FALSE(QuantParams{6, 9}.consistent(7, 7, 8, 6));
    }

    TEST_CASE("q7_to_q15_ordered examples")
    {
        CHECK(q7_to_q15_ordered(v7({1, 2, 3, 4})) == v15({1, 2, 3, 4}));
        CHECK(q7_to_q15_ordered(v7({-128, 127, 0, -1})) == v15({-128, 127, 0, -1}));
        CHECK(q7_to_q15_ordered(v7({5})) == v15({5}));
        CHECK(q7_to_q15_ordered(std::vector<q7_t>{}).empty());
    }

    TEST_CASE("q7_to_q15_ordered keeps every value for lengths 0..64")
    {
        testing::Gen g(25);
        for (int n = 0; n <= 64; ++n) {
            for (int rep = 0; rep < 20; ++rep) {
                const auto src = g.q7s(static_cast<std::size_t>(n));
                const auto out = q7_to_q15_ordered(src);
                REQUIRE(out.size() == src.size());
                for (int i = 0; i < n; ++i) {
                    REQUIRE(out[static_cast<std::size_t>(i)] == src[static_cast<std::size_t>(i)]);
                }
            }
        }
    }

    TEST_CASE("q7_to_q15_noreorder examples")
    {
        CHECK(q7_to_q15_noreorder(v7({1, 2, 3, 4})) == v15({1, 3, 2, 4}));
        CHECK(q7_to_q15_noreorder(v7({0, 0, 0, 0})) == v15({0, 0, 0, 0}));
        CHECK(q7_to_q15_noreorder(v7({1, 3, 2, 4})) == v15({1, 2, 3, 4}));
        CHECK(q7_to_q15_noreorder(v7({-1, -2, -3, -4, 9, 8})) == v15({-1, -3, -2, -4, 9, 8}));
    }

    TEST_CASE("q7_to_q15_noreorder permutes each group of four")
    {
        testing::Gen g(26);
        for (int n = 0; n <= 64; ++n) {
            const auto src = g.q7s(static_cast<std::size_t>(n));
            const auto out = q7_to_q15_noreorder(src);
            const int body = n & ~3;
            static constexpr int perm[4] = {0, 2, 1, 3};
            for (int i = 0; i < n; ++i) {
                const int from = i < body ? (i & ~3) + perm[i & 3] : i;
                REQUIRE(out[static_cast<std::size_t>(i)] == src[static_cast<std::size_t>(from)]);
            }
        }
    }

    TEST_CASE("span overloads reject short destinations")
    {
        const auto src = v7({1, 2, 3, 4, 5});
        std::vector<q15_t> dst(4);
        CHECK_THROWS_AS(q7_to_q15_ordered(src, dst), ShapeError);
        CHECK_THROWS_AS(q7_to_q15_noreorder(src, dst), ShapeError);
    }

    TEST_CASE("weight_byteswap_preprocess examples")
    {
        CHECK(weight_byteswap_preprocess(v7({1, 2, 3, 4})) == v7({1, 3, 2, 4}));
        CHECK(weight_byteswap_preprocess(v7({7, 7, 7, 7})) == v7({7, 7, 7, 7}));
        CHECK(weight_byteswap_preprocess(v7({1, 2, 3, 4, 5, 6})) == v7({1, 3, 2, 4, 5, 6}));
    }

    TEST_CASE("byte swap is self-inverse and undone by the unordered expansion")
    {
        testing::Gen g(27);
        for (int n = 0; n <= 64; ++n) {
            const auto w = g.q7s(static_cast<std::size_t>(n));
            const auto swapped = weight_byteswap_preprocess(w);
            REQUIRE(weight_byteswap_preprocess(swapped) == w);
            REQUIRE(q7_to_q15_noreorder(swapped) == q7_to_q15_ordered(w));
        }
    }

    TEST_CASE("row-wise byte swap treats every row separately")
    {
        testing::Gen g(28);
        for (int i = 0; i < 200; ++i) {
            const int rows = g.range(1, 9);
            const int cols = g.range(1, 13);
            const auto w = g.q7s(static_cast<std::size_t>(rows * cols));
            const auto sw = weight_byteswap_preprocess_rows(w, rows, cols);
            for (int r = 0; r < rows; ++r) {
                const auto row = std::span(w).subspan(static_cast<std::size_t>(r * cols), static_cast<std::size_t>(cols));
                const auto expect = weight_byteswap_preprocess(row);
                REQUIRE(std::equal(expect.begin(), expect.end(), sw.begin() + r * cols));
            }
        }
        CHECK_THROWS_AS(weight_byteswap_preprocess_rows(v7({1, 2, 3}), 2, 2), ShapeError);
    }
}
