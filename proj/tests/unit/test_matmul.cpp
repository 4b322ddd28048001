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

#include "qnn/matmul.hpp"
#include "qnn/reference.hpp"
#include "support/gen.hpp"

using namespace qnn;

TEST_SUITE("matmul 2x2")
{
    TEST_CASE("identity A returns requantized B")
    {
        const std::vector<q15_t> a{1, 0, 0, 1};
        const std::vector<q15_t> b{5, -7, 300, 12}; // two columns
        const std::vector<q31_t> bias{0, 0};
        CHECK(matmul_q15_2x2<q15_t>(a, b, bias, 2, 2, 2, QuantParams{0, 0}) == b);
        const auto halved = matmul_q15_2x2<q7_t>(a, b, bias, 2, 2, 2, QuantParams{0, 1});
        CHECK(halved == std::vector<q7_t>{3, -3, 127, 6});
    }

    TEST_CASE("1x1 product")
    {
        const std::vector<q15_t> a{3};
        const std::vector<q15_t> b{5};
        const std::vector<q31_t> bias{0};
        CHECK(matmul_q15_2x2<q15_t>(a, b, bias, 1, 1, 1, QuantParams{}) == std::vector<q15_t>{15});
    }

    TEST_CASE("bias enters shifted left")
    {
        const std::vector<q15_t> a{0, 0};
        const std::vector<q15_t> b{9, 9};
        const std::vector<q31_t> bias{3};
        CHECK(matmul_q15_2x2<q15_t>(a, b, bias, 1, 2, 1, QuantParams{4, 0}) == std::vector<q15_t>{48});
        CHECK(matmul_q15_2x2<q15_t>(a, b, bias, 1, 2, 1, QuantParams{4, 2}) == std::vector<q15_t>{12});
    }

    TEST_CASE("random 5x7 by 7x3 equals the oracle")
    {
        testing::Gen g(31);
        for (int i = 0; i < 200; ++i) {
            const auto a = g.q15s(35, 4096);
            const auto b = g.q15s(21, 4096);
            std::vector<q31_t> bias(5);
            for (auto& x : bias) {
                x = g.range(-1000, 1000);
            }
            const QuantParams q = g.quant(12);
            REQUIRE(matmul_q15_2x2<q15_t>(a, b, bias, 5, 7, 3, q) == ref::matmul<q15_t>(a, b, bias, 5, 7, 3, q));
            REQUIRE(matmul_q15_2x2<q7_t>(a, b, bias, 5, 7, 3, q) == ref::matmul<q7_t>(a, b, bias, 5, 7, 3, q));
        }
    }

    TEST_CASE("every row, inner and column parity equals the oracle")
    {
        testing::Gen g(32);
        for (int i = 0; i < 2000; ++i) {
            const int rows = g.range(1, 9);
            const int inner = g.range(1, 17);
            const int cols = g.range(1, 9);
            const auto a = g.q15s(static_cast<std::size_t>(rows * inner), 4096);
            const auto b = g.q15s(static_cast<std::size_t>(inner * cols), 4096);
            std::vector<q31_t> bias(static_cast<std::size_t>(rows));
            for (auto& x : bias) {
                x = g.range(-30000, 30000);
            }
            const QuantParams q = g.quant(14);
            INFO("rows=" << rows << " inner=" << inner << " cols=" << cols);
            REQUIRE(matmul_q15_2x2<q7_t>(a, b, bias, rows, inner, cols, q) ==
                    ref::matmul<q7_t>(a, b, bias, rows, inner, cols, q));
        }
    }

    TEST_CASE("dimension mismatch is rejected")
    {
        const std::vector<q15_t> a(6);
        const std::vector<q15_t> b(6);
        const std::vector<q31_t> bias(2);
        CHECK_THROWS_AS(matmul_q15_2x2<q7_t>(a, b, bias, 2, 3, 3, QuantParams{}), ShapeError);
        CHECK_THROWS_AS(matmul_q15_2x2<q7_t>(a, b, std::vector<q31_t>(3), 2, 3, 2, QuantParams{}), ShapeError);
        std::vector<q7_t> out(3);
        CHECK_THROWS_AS(matmul_q15_2x2<q7_t>(a, b, bias, 2, 3, 2, QuantParams{}, std::span<q7_t>(out)), ShapeError);
    }

    TEST_CASE("the oracle flags accumulators outside q31")
    {
        const std::vector<q15_t> a(4, -32768);
        const std::vector<q15_t> b(4, -32768);
        const std::vector<q31_t> bias{0};
        CHECK_THROWS_AS(ref::matmul<q7_t>(a, b, bias, 1, 4, 1, QuantParams{}), AccumulatorOverflow);
    }
}
