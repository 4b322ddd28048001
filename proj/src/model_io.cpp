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

#include "qnn/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

#include "qnn/fully_connected.hpp"

namespace qnn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "model.json";
constexpr const char* kWeights = "weights.bin";
constexpr const char* kFormat = "qnn-model";
constexpr int kVersion = 1;

std::vector<std::uint8_t> read_file(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + p.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) {
        throw IoError("error reading " + p.string());
    }
    return bytes;
}

void write_file(const fs::path& p, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot create " + p.string());
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) {
        throw IoError("error writing " + p.string());
    }
}

void put_le(std::vector<std::uint8_t>& out, std::uint32_t v, int bytes)
{
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint32_t get_le(const std::vector<std::uint8_t>& in, std::size_t at, int bytes)
{
    std::uint32_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
    }
    return v;
}

json shape_json(const Shape& s)
{
    return json::array({s.height, s.width, s.channels});
}

const json& member(const json& j, const char* key, const std::string& ctx)
{
    if (!j.is_object() || !j.contains(key)) {
        throw ManifestError(ctx + ": missing field '" + key + "'");
    }
    return j.at(key);
}

int int_field(const json& j, const char* key, const std::string& ctx)
{
    const json& v = member(j, key, ctx);
    if (!v.is_number_integer()) {
        throw ManifestError(ctx + ": field '" + key + "' must be an integer");
    }
    return v.get<int>();
}

bool bool_field(const json& j, const char* key, const std::string& ctx)
{
    const json& v = member(j, key, ctx);
    if (!v.is_boolean()) {
        throw ManifestError(ctx + ": field '" + key + "' must be a boolean");
    }
    return v.get<bool>();
}

std::string string_field(const json& j, const char* key, const std::string& ctx)
{
    const json& v = member(j, key, ctx);
    if (!v.is_string()) {
        throw ManifestError(ctx + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

Shape shape_field(const json& j, const char* key, const std::string& ctx)
{
    const json& v = member(j, key, ctx);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number_integer() || !v[1].is_number_integer() ||
        !v[2].is_number_integer()) {
        throw ManifestError(ctx + ": field '" + key + "' must be [height, width, channels]");
    }
    return Shape{v[0].get<int>(), v[1].get<int>(), v[2].get<int>()};
}

struct BlobRef {
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
};

BlobRef blob_field(const json& j, const char* key, const std::string& ctx)
{
    const json& v = member(j, key, ctx);
    const std::string sub = ctx + "." + key;
    const json& off = member(v, "offset", sub);
    const json& len = member(v, "length", sub);
    if (!off.is_number_unsigned() || !len.is_number_unsigned()) {
        throw ManifestError(sub + ": offset and length must be non-negative integers");
    }
    return {off.get<std::uint64_t>(), len.get<std::uint64_t>()};
}

std::vector<q7_t> take_blob(const std::vector<std::uint8_t>& bin, const BlobRef& ref, std::size_t expected,
                            const std::string& ctx)
{
    if (ref.length != expected) {
        throw BlobSizeError(ctx + ": blob holds " + std::to_string(ref.length) + " bytes, layer needs " +
                            std::to_string(expected));
    }
    if (ref.offset > bin.size() || ref.length > bin.size() - ref.offset) {
        throw BlobSizeError(ctx + ": range [" + std::to_string(ref.offset) + ", " +
                            std::to_string(ref.offset + ref.length) + ") runs past the end of " + kWeights + " (" +
                            std::to_string(bin.size()) + " bytes)");
    }
    const auto first = bin.begin() + static_cast<std::ptrdiff_t>(ref.offset);
    std::vector<q7_t> out(ref.length);
    std::transform(first, first + static_cast<std::ptrdiff_t>(ref.length), out.begin(),
                   [](std::uint8_t b) { return static_cast<q7_t>(b); });
    return out;
}

std::vector<q7_t> stored_weights(const LayerSpec& l)
{
    if (l.kind == LayerKind::FullyConnected && l.reordered) {
        return weight_reorder_1x4(l.weights, l.out_shape.channels, static_cast<int>(l.in_shape.size())).blob;
    }
    return l.weights;
}

json layer_json(const LayerSpec& l, std::uint64_t& offset)
{
    json j;
    j["name"] = l.name;
    j["kind"] = to_string(l.kind);
    j["kernel"] = l.kernel;
    j["stride"] = l.stride;
    j["pad"] = l.pad;
    j["in_shape"] = shape_json(l.in_shape);
    j["out_shape"] = shape_json(l.out_shape);
    j["in_frac_bits"] = l.in_frac_bits;
    j["out_frac_bits"] = l.out_frac_bits;
    if (has_weights(l.kind)) {
        j["weight_frac_bits"] = l.weight_frac_bits;
        j["bias_frac_bits"] = l.bias_frac_bits;
        j["bias_left_shift"] = l.quant.bias_left_shift;
        j["out_right_shift"] = l.quant.out_right_shift;
        j["weights"] = {{"offset", offset}, {"length", l.weights.size()}};
        offset += l.weights.size();
        j["bias"] = {{"offset", offset}, {"length", l.bias.size()}};
        offset += l.bias.size();
        if (l.kind == LayerKind::FullyConnected) {
            j["reordered"] = l.reordered;
        }
    }
    if (is_lut(l.kind)) {
        j["lut"] = {{"range_pow", l.lut.range_pow},
                    {"entries", l.lut.entries},
                    {"mode", to_string(l.lut.mode)},
                    {"interpolate", l.lut.interpolate}};
    }
    return j;
}

LayerSpec parse_layer(const json& j, std::size_t index, const std::vector<std::uint8_t>& bin, std::uint64_t& used)
{
    const std::string ctx = "layers[" + std::to_string(index) + "]";
    LayerSpec l;
    l.kind = parse_layer_kind(string_field(j, "kind", ctx));
    l.name = string_field(j, "name", ctx);
    l.kernel = int_field(j, "kernel", ctx);
    l.stride = int_field(j, "stride", ctx);
    l.pad = int_field(j, "pad", ctx);
    l.in_shape = shape_field(j, "in_shape", ctx);
    l.out_shape = shape_field(j, "out_shape", ctx);
    l.in_frac_bits = int_field(j, "in_frac_bits", ctx);
    l.out_frac_bits = int_field(j, "out_frac_bits", ctx);
    if (has_weights(l.kind)) {
        l.weight_frac_bits = int_field(j, "weight_frac_bits", ctx);
        l.bias_frac_bits = int_field(j, "bias_frac_bits", ctx);
        l.quant.bias_left_shift = int_field(j, "bias_left_shift", ctx);
        l.quant.out_right_shift = int_field(j, "out_right_shift", ctx);
        if (!l.in_shape.valid() || !l.out_shape.valid()) {
            throw ShapeError(ctx + ": invalid shape");
        }
        if (l.kind == LayerKind::FullyConnected) {
            l.reordered = bool_field(j, "reordered", ctx);
        }
        const BlobRef w = blob_field(j, "weights", ctx);
        const BlobRef b = blob_field(j, "bias", ctx);
        l.weights = take_blob(bin, w, l.expected_weight_count(), ctx + ".weights");
        l.bias = take_blob(bin, b, l.expected_bias_count(), ctx + ".bias");
        used += w.length + b.length;
        if (l.reordered) {
            ReorderedWeights rw;
            rw.rows = l.out_shape.channels;
            rw.cols = static_cast<int>(l.in_shape.size());
            rw.layout = WeightLayout::Interleaved1x4;
            rw.blob = std::move(l.weights);
            l.weights = deinterleave_1x4(rw);
        }
    }
    if (is_lut(l.kind)) {
        const json& t = member(j, "lut", ctx);
        const std::string sub = ctx + ".lut";
        l.lut.range_pow = int_field(t, "range_pow", sub);
        l.lut.entries = int_field(t, "entries", sub);
        try {
            l.lut.mode = parse_lut_mode(string_field(t, "mode", sub));
        } catch (const ParamError& e) {
            throw ManifestError(sub + ": " + e.what());
        }
        l.lut.interpolate = bool_field(t, "interpolate", sub);
    }
    return l;
}

} // namespace

std::string manifest_json(const Model& m)
{
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["name"] = m.name;
    j["weights_file"] = kWeights;
    j["input"] = {{"shape", shape_json(m.input_shape)}, {"frac_bits", m.input_frac_bits}};
    j["layers"] = json::array();
    std::uint64_t offset = 0;
    for (const auto& l : m.layers) {
        j["layers"].push_back(layer_json(l, offset));
    }
    return j.dump(2) + "\n";
}

Model load_model(const fs::path& path)
{
    std::error_code ec;
    const fs::path manifest = fs::is_directory(path, ec) ? path / kManifest : path;
    const std::vector<std::uint8_t> text = read_file(manifest);

    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw ManifestError(manifest.string() + ": " + e.what());
    }
    const std::string ctx = manifest.filename().string();
    if (string_field(j, "format", ctx) != kFormat) {
        throw ManifestError(ctx + ": not a " + std::string(kFormat) + " manifest");
    }
    if (int_field(j, "version", ctx) != kVersion) {
        throw ManifestError(ctx + ": unsupported version");
    }
    const json& layers = member(j, "layers", ctx);
    if (!layers.is_array()) {
        throw ManifestError(ctx + ": 'layers' must be an array");
    }

    Model m;
    m.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string{};
    const json& input = member(j, "input", ctx);
    m.input_shape = shape_field(input, "shape", ctx + ".input");
    m.input_frac_bits = int_field(input, "frac_bits", ctx + ".input");

    const fs::path weights = manifest.parent_path() / string_field(j, "weights_file", ctx);
    std::vector<std::uint8_t> bin;
    bool any_weights = false;
    for (const auto& l : layers) {
        // Kinds first, so an unsupported layer is reported as such.
        const LayerKind k = parse_layer_kind(string_field(l, "kind", ctx + ".layers[]"));
        any_weights = any_weights || has_weights(k);
    }
    if (any_weights || fs::exists(weights, ec)) {
        bin = read_file(weights);
    }

    std::uint64_t used = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        m.layers.push_back(parse_layer(layers[i], i, bin, used));
    }
    if (used != bin.size()) {
        throw BlobSizeError(weights.string() + " holds " + std::to_string(bin.size()) +
                            " bytes, the manifest references " + std::to_string(used));
    }
    m.validate();
    return m;
}

void save_model(const Model& m, const fs::path& dir)
{
    m.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    std::vector<std::uint8_t> bin;
    for (const auto& l : m.layers) {
        if (!has_weights(l.kind)) {
            continue;
        }
        for (q7_t w : stored_weights(l)) {
            bin.push_back(static_cast<std::uint8_t>(w));
        }
        for (q7_t b : l.bias) {
            bin.push_back(static_cast<std::uint8_t>(b));
        }
    }
    const std::string text = manifest_json(m);
    write_file(dir / kManifest, std::vector<std::uint8_t>(text.begin(), text.end()));
    write_file(dir / kWeights, bin);
}

Q7Tensor load_input(const fs::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() < 8) {
        throw IoError(path.string() + ": shorter than the 8-byte header");
    }
    const auto field = [&](std::size_t i) { return static_cast<std::int16_t>(get_le(bytes, 2 * i, 2)); };
    const Shape shape{field(0), field(1), field(2)};
    const int frac = field(3);
    if (!shape.valid()) {
        throw ShapeError(path.string() + ": invalid shape " + shape.str());
    }
    if (frac < 0 || frac > 7) {
        throw ParamError(path.string() + ": frac_bits " + std::to_string(frac) + " outside [0, 7]");
    }
    if (bytes.size() - 8 != shape.size()) {
        throw ShapeError(path.string() + ": header says " + shape.str() + " (" + std::to_string(shape.size()) +
                         " bytes), payload has " + std::to_string(bytes.size() - 8));
    }
    std::vector<q7_t> data(shape.size());
    std::transform(bytes.begin() + 8, bytes.end(), data.begin(), [](std::uint8_t b) { return static_cast<q7_t>(b); });
    return Q7Tensor(shape, frac, std::move(data));
}

void save_input(const Q7Tensor& t, const fs::path& path)
{
    if (!t.shape().valid() || t.height() > 32767 || t.width() > 32767 || t.channels() > 32767) {
        throw ShapeError(path.string() + ": shape " + t.shape().str() + " does not fit the int16 header");
    }
    std::vector<std::uint8_t> bytes;
    for (int v : {t.height(), t.width(), t.channels(), t.frac_bits()}) {
        put_le(bytes, static_cast<std::uint32_t>(v), 2);
    }
    for (q7_t v : t.data()) {
        bytes.push_back(static_cast<std::uint8_t>(v));
    }
    write_file(path, bytes);
}

LutTable load_table(const fs::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() < 16) {
        throw IoError(path.string() + ": shorter than the 16-byte header");
    }
    const std::uint32_t func = get_le(bytes, 0, 4);
    const std::uint32_t mode = get_le(bytes, 4, 4);
    const std::uint32_t range_pow = get_le(bytes, 8, 4);
    const std::uint32_t entries = get_le(bytes, 12, 4);
    if (func > 1 || mode > 1 || range_pow > 16 || entries > 65536) {
        throw ParamError(path.string() + ": header fields out of range");
    }
    const std::size_t payload = bytes.size() - 16;
    int width = 0;
    if (payload == entries) {
        width = 8;
    } else if (payload == 2 * static_cast<std::size_t>(entries)) {
        width = 16;
    } else {
        throw ParamError(path.string() + ": payload of " + std::to_string(payload) + " bytes does not fit " +
                         std::to_string(entries) + " entries");
    }
    LutTable t = build_lut(static_cast<LutFunc>(func), static_cast<LutMode>(mode), static_cast<int>(range_pow),
                           static_cast<int>(entries), width);
    for (std::size_t i = 0; i < entries; ++i) {
        t.values[i] = width == 8 ? static_cast<q15_t>(static_cast<q7_t>(bytes[16 + i]))
                                 : static_cast<q15_t>(get_le(bytes, 16 + 2 * i, 2));
    }
    return t;
}

void save_table(const LutTable& t, const fs::path& path)
{
    std::vector<std::uint8_t> bytes;
    put_le(bytes, static_cast<std::uint32_t>(t.func), 4);
    put_le(bytes, static_cast<std::uint32_t>(t.mode), 4);
    put_le(bytes, static_cast<std::uint32_t>(t.range_pow), 4);
    put_le(bytes, static_cast<std::uint32_t>(t.entries), 4);
    for (q15_t v : t.values) {
        put_le(bytes, static_cast<std::uint16_t>(v), t.elem_width / 8);
    }
    write_file(path, bytes);
}

} // namespace qnn
