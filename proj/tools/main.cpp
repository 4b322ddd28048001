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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_model_options(CLI::App* cmd, qnn::cli::ModelSource& src)
{
    cmd->add_option("--model", src.path, "Model directory or model.json");
    cmd->add_option("--random-model", src.random_spec, "Generate a model: cifar10, cifar10-relu, small");
    cmd->add_option("--seed", src.seed, "Seed for generated models and inputs");
}

void add_im2col_options(CLI::App* cmd, qnn::PlanOptions& plan)
{
    auto* partial = cmd->add_option("--partial-cols", plan.partial_cols, "im2col columns per matrix call (even)");
    auto* full = cmd->add_flag("--full-im2col", plan.full_im2col, "Buffer every im2col column at once");
    partial->excludes(full);
}

} // namespace

int main(int argc, char** argv)
{
    using namespace qnn::cli;

    CLI::App app{"Fixed-point inference kernels: run, plan, bench and table generation"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a model on one input");
    add_model_options(run_cmd, run.model);
    add_im2col_options(run_cmd, run.plan);
    run_cmd->add_option("--input", run.input_path, "Input file (8-byte header + q7 HWC)");
    run_cmd->add_flag("--random-input", run.random_input, "Use a seeded random input");
    run_cmd->add_flag("--oracle", run.oracle, "Rerun through the reference pipeline and compare");

    PlanOptionsCmd plan;
    auto* plan_cmd = app.add_subcommand("plan", "Print op counts and the memory plan");
    add_model_options(plan_cmd, plan.model);
    add_im2col_options(plan_cmd, plan.plan);

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time optimized kernels against the reference pipeline");
    add_model_options(bench_cmd, bench.model);
    bench_cmd->add_option("--iters", bench.iters, "Iterations")->check(CLI::PositiveNumber);

    GenTablesOptions tables;
    auto* tables_cmd = app.add_subcommand("gen-tables", "Build an activation table and report its error");
    tables_cmd->add_option("--func", tables.func, "sigmoid or tanh")->check(CLI::IsMember({"sigmoid", "tanh"}));
    tables_cmd->add_option("--mode", tables.mode, "unified or two_region")
        ->check(CLI::IsMember({"unified", "two_region"}));
    tables_cmd->add_option("--range", tables.range, "Input range bound: 4 or 8");
    tables_cmd->add_option("--entries", tables.entries, "Table entries (power of two)");
    tables_cmd->add_option("--width", tables.width, "Entry width in bits: 8 or 16");
    tables_cmd->add_option("--points", tables.points, "Sweep points for the error report")
        ->check(CLI::PositiveNumber);
    tables_cmd->add_option("--out", tables.out, "Output table file");

    GenModelOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-model", "Write a generated model (and optionally an input)");
    add_model_options(gen_cmd, gen.model);
    gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
    gen_cmd->add_option("--input", gen.input_path, "Also write a random input file here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    return guarded(
        [&]() {
            if (*run_cmd) {
                return cmd_run(run, std::cout);
            }
            if (*plan_cmd) {
                return cmd_plan(plan, std::cout);
            }
            if (*bench_cmd) {
                return cmd_bench(bench, std::cout);
            }
            if (*tables_cmd) {
                return cmd_gen_tables(tables, std::cout);
            }
            return cmd_gen_model(gen, std::cout);
        },
        std::cerr);
}
