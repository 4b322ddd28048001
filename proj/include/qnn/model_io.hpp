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

// On-disk formats.
//
// Model directory: model.json (layer list and formats) plus weights.bin,
// the concatenated q7 blobs in little-endian byte order. Each weighted layer
// references its weights and bias as {offset, length} byte ranges. Fully
// connected layers flagged "reordered" store the 1x4-interleaved matrix.
//
// Input file: int16 height, width, channels, frac_bits (little-endian),
// then height*width*channels q7 bytes in HWC order.
//
// Table file: uint32 func, mode, range_pow, entries (little-endian), then
// the entries as q7 bytes or little-endian q15 pairs; the payload length
// tells which.

#include <filesystem>
#include <string>

#include "qnn/activation.hpp"
#include "qnn/model.hpp"
#include "qnn/tensor.hpp"

namespace qnn {

/// The manifest text save_model writes for `m` (weights file name fixed).
std::string manifest_json(const Model& m);

/// `path` is a model directory or a manifest file; weights.bin is looked up
/// next to the manifest. Errors: IoError (missing/unreadable files),
/// ManifestError (bad JSON, missing or mistyped fields), BlobSizeError
/// (weights.bin shorter or longer than the referenced ranges),
/// UnsupportedLayerError (unknown kind); the loaded model is validated.
Model load_model(const std::filesystem::path& path);

/// Writes model.json and weights.bin into directory `dir` (created if needed).
void save_model(const Model& m, const std::filesystem::path& dir);

Q7Tensor load_input(const std::filesystem::path& path);
void save_input(const Q7Tensor& t, const std::filesystem::path& path);

LutTable load_table(const std::filesystem::path& path);
void save_table(const LutTable& t, const std::filesystem::path& path);

} // namespace qnn
