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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qnn {

using q7_t = std::int8_t;
using q15_t = std::int16_t;
using q31_t = std::int32_t;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tensor or matrix dimensions that do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Layer parameters outside what a kernel supports (bad stride, pad, shift...).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Caller-provided scratch buffer is smaller than the kernel needs.
class ScratchError : public Error {
public:
    using Error::Error;
};

/// A reference accumulator left the q31 range, so a wrapping kernel would diverge.
class AccumulatorOverflow : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// model.json is not valid JSON or misses required fields.
class ManifestError : public Error {
public:
    using Error::Error;
};

/// weights.bin does not hold the bytes the manifest references.
class BlobSizeError : public Error {
public:
    using Error::Error;
};

class UnsupportedLayerError : public Error {
public:
    using Error::Error;
};

} // namespace qnn
