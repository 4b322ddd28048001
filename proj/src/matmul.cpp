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

#include "qnn/matmul.hpp"

#include <string>

#include "mat_mult_kernel.hpp"

namespace qnn {

template <class Out>
void matmul_q15_2x2(std::span<const q15_t> a, std::span<const q15_t> b_cols, std::span<const q31_t> bias, int rows,
                    int inner, int cols, const QuantParams& q, std::span<Out> out)
{
    q.validate();
    if (rows < 0 || inner < 0 || cols < 0) {
        throw ShapeError("matmul_q15_2x2: negative dimension");
    }
    const auto r = static_cast<std::size_t>(rows);
    const auto k = static_cast<std::size_t>(inner);
    const auto c = static_cast<std::size_t>(cols);
    if (a.size() != r * k || b_cols.size() != k * c || bias.size() != r || out.size() < r * c) {
        throw ShapeError("matmul_q15_2x2: operand sizes do not match " + std::to_string(rows) + "x" +
                         std::to_string(inner) + " * " + std::to_string(inner) + "x" + std::to_string(cols));
    }
    detail::mat_mult_2x2(a.data(), rows, inner, b_cols.data(), cols, bias.data(), q, out.data());
}

template <class Out>
std::vector<Out> matmul_q15_2x2(std::span<const q15_t> a, std::span<const q15_t> b_cols,
                                std::span<const q31_t> bias, int rows, int inner, int cols, const QuantParams& q)
{
    std::vector<Out> out(static_cast<std::size_t>(rows < 0 ? 0 : rows) * static_cast<std::size_t>(cols < 0 ? 0 : cols));
    matmul_q15_2x2<Out>(a, b_cols, bias, rows, inner, cols, q, std::span<Out>(out));
    return out;
}

template void matmul_q15_2x2<q7_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>, int, int,
                                   int, const QuantParams&, std::span<q7_t>);
template void matmul_q15_2x2<q15_t>(std::span<const q15_t>, std::span<const q15_t>, std::span<const q31_t>, int, int,
                                    int, const QuantParams&, std::span<q15_t>);
template std::vector<q7_t> matmul_q15_2x2<q7_t>(std::span<const q15_t>, std::span<const q15_t>,
                                                std::span<const q31_t>, int, int, int, const QuantParams&);
template std::vector<q15_t> matmul_q15_2x2<q15_t>(std::span<const q15_t>, std::span<const q15_t>,
                                                  std::span<const q31_t>, int, int, int, const QuantParams&);

} // namespace qnn
