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

// In-situ split x-y pooling on q7 HWC data.
//
// The x pass pools along the width inside every input row and leaves the
// result at the start of that row; the y pass pools those partial rows and
// packs the final H_out x W_out x C tensor at the front of the buffer. The
// input is destroyed.
//
// Pooling in place is only possible while every output slot lies at or
// before the first input it depends on. That holds when pad <= stride - 1
// (so pad = 0 for stride 1); other geometries are rejected with ParamError.

#include <cstdint>
#include <span>

#include "qnn/tensor.hpp"
#include "qnn/types.hpp"

namespace qnn {

struct PoolParams {
    int kernel_h = 1;
    int kernel_w = 1;
    int stride_h = 1;
    int stride_w = 1;
    int pad_h = 0;
    int pad_w = 0;

    static constexpr PoolParams square(int kernel, int stride, int pad) noexcept
    {
        return {kernel, kernel, stride, stride, pad, pad};
    }

    /// Output shape for `in`. Throws ParamError for non-positive sizes,
    /// pad >= kernel, pad > stride - 1 or an empty output.
    Shape output_shape(const Shape& in) const;

    int window_area() const noexcept { return kernel_h * kernel_w; }
};

/// Max pooling in place. Returns the output shape; the output occupies the
/// first out.size() entries of `buf`.
Shape maxpool_insitu(std::span<q7_t> buf, const Shape& in, const PoolParams& p);
void maxpool_insitu(Q7Tensor& t, const PoolParams& p);

/// int32 entries of scratch avgpool_insitu needs: kernel_h rows of x-pass
/// sums, each W_out * C wide.
std::size_t avgpool_scratch_size(const Shape& in, const PoolParams& p);

/// Average pooling in place. The divisor is always kernel_h * kernel_w, with
/// padded positions counted as zeros; the quotient is rounded to nearest,
/// ties away from zero. x-pass sums are kept in `scratch` as int32.
Shape avgpool_insitu(std::span<q7_t> buf, const Shape& in, const PoolParams& p, std::span<std::int32_t> scratch);
void avgpool_insitu(Q7Tensor& t, const PoolParams& p);

/// Rounded quotient used by average pooling (round half away from zero).
constexpr std::int32_t rounded_div(std::int64_t sum, std::int64_t divisor) noexcept
{
    return static_cast<std::int32_t>(sum >= 0 ? (sum + divisor / 2) / divisor : -((-sum + divisor / 2) / divisor));
}

} // namespace qnn
