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

// Subcommands of the qnn tool, callable without the argument parser.

#include <functional>
#include <ostream>
#include <string>

#include "qnn/memory_plan.hpp"
#include "qnn/model.hpp"

namespace qnn::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kValidation = 3,
    kDivergence = 4,
};

/// Either a model directory/manifest or a generated model.
struct ModelSource {
    std::string path;
    /// cifar10, cifar10-relu or small.
    std::string random_spec;
    unsigned seed = 1;
};

/// Throws ParamError for an unknown generator name or when neither/both are given.
Model resolve_model(const ModelSource& src);

struct RunOptions {
    ModelSource model;
    std::string input_path;
    bool random_input = false;
    bool oracle = false;
    PlanOptions plan;
};

struct PlanOptionsCmd {
    ModelSource model;
    PlanOptions plan;
};

struct BenchOptions {
    ModelSource model;
    int iters = 10;
};

struct GenTablesOptions {
    std::string func = "sigmoid";
    std::string mode = "unified";
    int range = 8;
    int entries = 256;
    int width = 8;
    int points = 100000;
    std::string out;
};

struct GenModelOptions {
    ModelSource model;
    std::string out_dir;
    std::string input_path;
};

int cmd_run(const RunOptions& o, std::ostream& out);
int cmd_plan(const PlanOptionsCmd& o, std::ostream& out);
int cmd_bench(const BenchOptions& o, std::ostream& out);
int cmd_gen_tables(const GenTablesOptions& o, std::ostream& out);
int cmd_gen_model(const GenModelOptions& o, std::ostream& out);

/// Runs `body`, mapping library errors to exit codes and printing them to `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

/// 4915200 -> "4.9 M" style figure with `digits` significant digits.
std::string human_count(std::int64_t n, int digits = 3);

} // namespace qnn::cli
