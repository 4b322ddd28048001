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

// Sequential execution of a Model through the optimized kernels, and the
// same network through the reference oracles.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qnn/activation.hpp"
#include "qnn/fully_connected.hpp"
#include "qnn/memory_plan.hpp"
#include "qnn/model.hpp"
#include "qnn/tensor.hpp"

namespace qnn {

struct LayerTiming {
    std::string name;
    LayerKind kind = LayerKind::Relu;
    std::int64_t ops = 0;
    double seconds = 0.0;
};

struct RunResult {
    Q7Tensor output;
    std::vector<LayerTiming> layers;

    int argmax() const noexcept;
};

/// Owns a copy of the model, the prepared weights (1x4-interleaved fully
/// connected matrices, activation tables) and every buffer of its memory
/// plan. One Runner per thread.
class Runner {
public:
    explicit Runner(Model model, const PlanOptions& opt = {});

    /// Throws ShapeError when the input shape differs from the model's and
    /// ParamError when its format does.
    RunResult run(const Q7Tensor& input);

    const Model& model() const noexcept { return model_; }
    const MemoryPlan& plan() const noexcept { return plan_; }

private:
    void run_layer(std::size_t i, int& cur);

    Model model_;
    MemoryPlan plan_;
    std::vector<ReorderedWeights> fc_weights_;
    std::vector<LutTable> tables_;
    std::array<std::vector<q7_t>, 2> buffers_;
    std::vector<q15_t> scratch_;
    std::vector<std::int32_t> pool_scratch_;
};

/// Reference pipeline. Accumulator overflow surfaces as AccumulatorOverflow.
RunResult run_reference(const Model& model, const Q7Tensor& input);

/// Throws unless `input` matches the model's input shape and format.
void check_input(const Model& model, const Q7Tensor& input);

} // namespace qnn
