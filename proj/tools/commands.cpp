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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "qnn/activation.hpp"
#include "qnn/model_io.hpp"
#include "qnn/runner.hpp"

namespace qnn::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::string fixed(double v, int decimals)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(decimals) << v;
    return s.str();
}

std::string kb(std::size_t bytes)
{
    return std::to_string(bytes) + " B (" + fixed(static_cast<double>(bytes) / 1024.0, 1) + " KB)";
}

void print_logits(const Q7Tensor& t, std::ostream& out)
{
    out << "logits:";
    for (q7_t v : t.data()) {
        out << ' ' << static_cast<int>(v);
    }
    out << "\n";
}

bool same_output(const RunResult& a, const RunResult& b)
{
    return a.output == b.output;
}

Q7Tensor input_for(const RunOptions& o, const Model& m)
{
    if (!o.input_path.empty()) {
        return load_input(o.input_path);
    }
    if (!o.random_input) {
        throw ParamError("run needs --input PATH or --random-input");
    }
    std::mt19937 rng(o.model.seed + 1);
    return random_input(m, rng);
}

} // namespace

std::string human_count(std::int64_t n, int digits)
{
    const double v = static_cast<double>(n);
    const char* suffix = "";
    double scaled = v;
    if (std::abs(v) >= 1e6) {
        scaled = v / 1e6;
        suffix = " M";
    } else if (std::abs(v) >= 1e3) {
        scaled = v / 1e3;
        suffix = " K";
    } else {
        return std::to_string(n);
    }
    const int int_digits = static_cast<int>(std::floor(std::log10(std::abs(scaled)))) + 1;
    return fixed(scaled, std::max(0, digits - int_digits)) + suffix;
}

Model resolve_model(const ModelSource& src)
{
    if (src.path.empty() == src.random_spec.empty()) {
        throw ParamError("give exactly one of --model PATH or --random-model NAME");
    }
    if (!src.path.empty()) {
        return load_model(src.path);
    }
    std::mt19937 rng(src.seed);
    if (src.random_spec == "cifar10" || src.random_spec == "cifar10-relu") {
        Model m = cifar10_model(src.random_spec == "cifar10-relu");
        randomize_weights(m, rng);
        return m;
    }
    if (src.random_spec == "small") {
        return random_small_model(rng);
    }
    throw ParamError("unknown random model '" + src.random_spec + "' (cifar10, cifar10-relu, small)");
}

int cmd_run(const RunOptions& o, std::ostream& out)
{
    const Model m = resolve_model(o.model);
    const Q7Tensor input = input_for(o, m);
    Runner runner(m, o.plan);
    const RunResult r = runner.run(input);

    out << "model: " << (m.name.empty() ? "(unnamed)" : m.name) << ", " << m.layers.size() << " layers, input "
        << m.input_shape.str() << " frac " << m.input_frac_bits << "\n";
    out << std::left << std::setw(12) << "layer" << std::setw(16) << "kind" << std::setw(12) << "output"
        << std::right << std::setw(14) << "ops" << std::setw(12) << "time_us" << "\n";
    for (std::size_t i = 0; i < r.layers.size(); ++i) {
        const auto& lt = r.layers[i];
        out << std::left << std::setw(12) << lt.name << std::setw(16) << to_string(lt.kind) << std::setw(12)
            << m.layers[i].out_shape.str() << std::right << std::setw(14) << lt.ops << std::setw(12)
            << fixed(lt.seconds * 1e6, 1) << "\n";
    }
    print_logits(r.output, out);
    out << "argmax: " << r.argmax() << "\n";

    if (o.oracle) {
        const RunResult ref = run_reference(m, input);
        if (!same_output(r, ref)) {
            out << "oracle: MISMATCH\n";
            print_logits(ref.output, out);
            return kDivergence;
        }
        out << "oracle: MATCH\n";
    }
    return kOk;
}

int cmd_plan(const PlanOptionsCmd& o, std::ostream& out)
{
    const Model m = resolve_model(o.model);
    const MemoryPlan plan = plan_memory(m, o.plan);
    PlanOptions other = o.plan;
    other.full_im2col = !o.plan.full_im2col;
    const MemoryPlan alt = plan_memory(m, other);
    const OpCount ops = count_ops(m);

    out << "im2col: "
        << (plan.options.full_im2col ? std::string("full") : std::to_string(plan.options.partial_cols) + " columns")
        << "\n";
    out << std::left << std::setw(12) << "layer" << std::setw(16) << "kind" << std::setw(12) << "output"
        << std::right << std::setw(12) << "ops" << std::setw(10) << "ops~" << std::setw(10) << "out_B"
        << std::setw(10) << "scratch_B" << std::setw(6) << "buf" << "\n";
    for (std::size_t i = 0; i < plan.layers.size(); ++i) {
        const auto& lm = plan.layers[i];
        out << std::left << std::setw(12) << lm.name << std::setw(16) << to_string(lm.kind) << std::setw(12)
            << m.layers[i].out_shape.str() << std::right << std::setw(12) << lm.ops << std::setw(10)
            << human_count(lm.ops) << std::setw(10) << lm.out_bytes << std::setw(10) << lm.scratch_bytes
            << std::setw(6) << lm.out_buffer << "\n";
    }
    out << "total ops: " << ops.total << " (" << human_count(ops.total) << ")\n";
    out << "weights: " << kb(plan.weight_bytes) << ", biases: " << kb(plan.bias_bytes) << "\n";
    out << "activation outputs (sum): " << kb(plan.activation_sum) << "\n";
    out << "largest in+out pair: " << kb(plan.largest_pair) << "\n";
    out << "activation buffers: " << plan.activation_buffers[0] << " + " << plan.activation_buffers[1] << " = "
        << kb(plan.activation_bytes()) << "\n";
    out << "scratch: " << kb(plan.scratch_bytes) << "\n";
    if (plan.table_bytes > 0) {
        out << "tables: " << kb(plan.table_bytes) << "\n";
    }
    out << "peak: " << kb(plan.peak_bytes) << "\n";
    const MemoryPlan& partial = plan.options.full_im2col ? alt : plan;
    const MemoryPlan& full = plan.options.full_im2col ? plan : alt;
    out << "peak with partial im2col (" << partial.options.partial_cols << " columns): " << kb(partial.peak_bytes)
        << "\n";
    out << "peak with full im2col: " << kb(full.peak_bytes) << "\n";
    return kOk;
}

int cmd_bench(const BenchOptions& o, std::ostream& out)
{
    if (o.iters < 1) {
        throw ParamError("--iters must be >= 1");
    }
    const Model m = resolve_model(o.model);
    std::mt19937 rng(o.model.seed + 1);
    const Q7Tensor input = random_input(m, rng);
    Runner runner(m);

    const RunResult check_opt = runner.run(input);
    const RunResult check_ref = run_reference(m, input);
    if (!same_output(check_opt, check_ref)) {
        out << "optimized and baseline outputs differ; not timing\n";
        return kDivergence;
    }

    std::vector<double> base(m.layers.size(), 0.0);
    std::vector<double> opt(m.layers.size(), 0.0);
    for (int it = 0; it < o.iters; ++it) {
        const RunResult a = run_reference(m, input);
        const RunResult b = runner.run(input);
        for (std::size_t i = 0; i < m.layers.size(); ++i) {
            base[i] += a.layers[i].seconds;
            opt[i] += b.layers[i].seconds;
        }
    }

    out << "iterations: " << o.iters << " (mean per inference)\n";
    out << std::left << std::setw(12) << "layer" << std::setw(16) << "kind" << std::right << std::setw(14)
        << "baseline_us" << std::setw(14) << "optimized_us" << std::setw(10) << "ratio" << "\n";
    double base_total = 0.0;
    double opt_total = 0.0;
    const auto ratio = [](double b, double x) { return x > 0.0 ? b / x : 0.0; };
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        const double b = base[i] / o.iters;
        const double x = opt[i] / o.iters;
        base_total += b;
        opt_total += x;
        out << std::left << std::setw(12) << m.layers[i].name << std::setw(16) << to_string(m.layers[i].kind)
            << std::right << std::setw(14) << fixed(b * 1e6, 1) << std::setw(14) << fixed(x * 1e6, 1)
            << std::setw(10) << fixed(ratio(b, x), 2) << "\n";
    }
    out << std::left << std::setw(28) << "total" << std::right << std::setw(14) << fixed(base_total * 1e6, 1)
        << std::setw(14) << fixed(opt_total * 1e6, 1) << std::setw(10) << fixed(ratio(base_total, opt_total), 2)
        << "\n";
    return kOk;
}

int cmd_gen_tables(const GenTablesOptions& o, std::ostream& out)
{
    if (o.range != 4 && o.range != 8) {
        throw ParamError("--range must be 4 or 8");
    }
    const LutTable t = build_lut(parse_lut_func(o.func), parse_lut_mode(o.mode), o.range == 4 ? 2 : 3, o.entries,
                                 o.width);
    if (!o.out.empty()) {
        save_table(t, o.out);
        out << "wrote " << o.out << " (" << t.entries << " q" << t.out_frac_bits() << " entries)\n";
    }
    const double lsb = std::ldexp(1.0, -7);
    for (bool interp : {false, true}) {
        const double err = lut_max_abs_error(t, interp, o.points);
        out << "max_abs_error " << (interp ? "interpolated" : "nearest") << ": " << fixed(err, 6) << " ("
            << fixed(err / lsb, 3) << " LSB of q0.7)\n";
    }
    return kOk;
}

int cmd_gen_model(const GenModelOptions& o, std::ostream& out)
{
    if (o.out_dir.empty()) {
        throw ParamError("gen-model needs --out DIR");
    }
    const Model m = resolve_model(o.model);
    save_model(m, o.out_dir);
    out << "wrote " << o.out_dir << " (" << m.layers.size() << " layers, " << m.weight_bytes() + m.bias_bytes()
        << " blob bytes)\n";
    if (!o.input_path.empty()) {
        std::mt19937 rng(o.model.seed + 1);
        save_input(random_input(m, rng), o.input_path);
        out << "wrote " << o.input_path << "\n";
    }
    return kOk;
}

int guarded(const std::function<int()>& body, std::ostream& err)
{
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const AccumulatorOverflow& e) {
        err << "divergence: " << e.what() << "\n";
        return kDivergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

} // namespace qnn::cli
