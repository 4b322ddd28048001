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

#include "qnn/runner.hpp"
#include "support/gen.hpp"

using namespace qnn;

TEST_SUITE("runner")
{
    TEST_CASE("kernels equal the reference pipeline on random small models")
    {
        for (std::uint32_t seed = 0; seed < 300; ++seed) {
            std::mt19937 rng(seed);
            const auto m = random_small_model(rng);
            Runner r(m, seed % 2 == 0 ? PlanOptions{} : PlanOptions{2, true});
            for (int k = 0; k < 3; ++k) {
                const auto x = random_input(m, rng);
                INFO("seed=" << seed << " input=" << k);
                REQUIRE(r.run(x).output == run_reference(m, x).output);
            }
        }
    }

    TEST_CASE("kernels equal the reference pipeline on the CIFAR-10 network")
    {
        for (bool relu : {false, true}) {
            auto m = cifar10_model(relu);
            std::mt19937 rng(relu ? 2 : 1);
            randomize_weights(m, rng);
            Runner r(m);
            for (int k = 0; k < 3; ++k) {
                const auto x = random_input(m, rng);
                const auto got = r.run(x);
                const auto want = run_reference(m, x);
                REQUIRE(got.output == want.output);
                CHECK(got.output.shape() == Shape{1, 1, 10});
                CHECK(got.argmax() == want.argmax());
                CHECK(got.layers.size() == m.layers.size());
            }
        }
    }

    TEST_CASE("a single ReLU layer")
    {
        Model m;
        m.name = "relu-only";
        m.input_shape = Shape{1, 1, 4};
        LayerSpec l;
        l.name = "relu";
        l.kind = LayerKind::Relu;
        l.in_shape = l.out_shape = m.input_shape;
        m.layers.push_back(l);
        Runner r(m);
        const Q7Tensor x(m.input_shape, 7, {-1, 2, -128, 127});
        CHECK(r.run(x).output.storage() == std::vector<q7_t>{0, 2, 0, 127});
    }

    TEST_CASE("zero weights return the requantized biases")
    {
        auto m = cifar10_model();
        auto& fc = m.layers.back();
        for (std::size_t i = 0; i < fc.bias.size(); ++i) {
            fc.bias[i] = static_cast<q7_t>(static_cast<int>(i) - 5);
        }
        std::mt19937 rng(3);
        const auto out = Runner(m).run(random_input(m, rng)).output;
        for (std::size_t i = 0; i < fc.bias.size(); ++i) {
            CHECK(out.storage()[i] == requantize(std::int64_t{fc.bias[i]} << fc.quant.bias_left_shift,
                                                 fc.quant.out_right_shift, 8));
        }
    }

    TEST_CASE("argmax picks the first maximum")
    {
        RunResult r;
        r.output = Q7Tensor(Shape{1, 1, 4}, 7, {3, 9, 9, -1});
        CHECK(r.argmax() == 1);
    }

    TEST_CASE("input checks")
    {
        const auto m = cifar10_model();
        Runner r(m);
        CHECK_THROWS_AS(r.run(Q7Tensor(Shape{32, 32, 1}, 7)), ShapeError);
        CHECK_THROWS_AS(r.run(Q7Tensor(Shape{32, 32, 3}, 5)), ParamError);
        CHECK_THROWS_AS(run_reference(m, Q7Tensor(Shape{31, 32, 3}, 7)), ShapeError);
    }
}
