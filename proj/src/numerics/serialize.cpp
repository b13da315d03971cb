// Copyright (c) 2026 The crlbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crl/numerics/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace crl::numerics {

namespace {

using nlohmann::json;

json layer_to_json(const LayerSpec& l) {
    json j{{"kind", to_string(l.kind)}};
    switch (l.kind) {
        case LayerKind::conv:
            j["filters"] = l.filters;
            j["kernel"] = {l.kernel_rows, l.kernel_cols};
            j["stride"] = {l.stride_rows, l.stride_cols};
            break;
        case LayerKind::maxpool:
            j["pool"] = {l.pool_rows, l.pool_cols};
            break;
        case LayerKind::dense:
            j["units"] = l.units;
            break;
        default:
            break;
    }
    return j;
}

LayerSpec layer_from_json(const json& j) {
    const LayerKind kind = layer_kind_from_string(j.at("kind").get<std::string>());
    switch (kind) {
        case LayerKind::conv:
            return LayerSpec::conv(j.at("filters"), j.at("kernel")[0], j.at("kernel")[1], j.at("stride")[0],
                                   j.at("stride")[1]);
        case LayerKind::maxpool:
            return LayerSpec::maxpool(j.at("pool")[0], j.at("pool")[1]);
        case LayerKind::dense:
            return LayerSpec::dense(j.at("units"));
        case LayerKind::relu:
            return LayerSpec::relu();
        case LayerKind::flatten:
            return LayerSpec::flatten();
        case LayerKind::linear:
            return LayerSpec::linear();
    }
    throw std::invalid_argument("bad layer");
}

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
    return v;
}

}  // namespace

void write_network(std::ostream& out, const Network& net) {
    json manifest;
    manifest["format"] = "crl-parameters";
    manifest["version"] = 1;
    manifest["input_shape"] = net.input_shape();
    manifest["layers"] = json::array();
    for (const auto& l : net.layers()) manifest["layers"].push_back(layer_to_json(l));
    manifest["blocks"] = json::array();
    for (const auto& b : net.parameters().blocks())
        manifest["blocks"].push_back({{"layer", b.layer}, {"weight", b.weight.shape()}, {"bias", b.bias.shape()}});
    manifest["count"] = net.parameters().total_count();
    out << manifest.dump() << '\n';
    for (double v : net.parameters().flatten()) {
        std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.write(buf, 8);
    }
    if (!out) throw std::runtime_error("failed to write parameter file");
}

Network read_network(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parameter file: missing manifest");
    const json manifest = json::parse(line);
    if (manifest.value("format", "") != "crl-parameters")
        throw std::runtime_error("parameter file: unrecognised format");
    std::vector<LayerSpec> layers;
    for (const auto& l : manifest.at("layers")) layers.push_back(layer_from_json(l));
    Network net(std::move(layers), manifest.at("input_shape").get<Shape>());
    const std::size_t count = manifest.at("count");
    if (count != net.parameters().total_count())
        throw ShapeError("parameter file: manifest count " + std::to_string(count) + " does not match architecture (" +
                         std::to_string(net.parameters().total_count()) + ")");
    const auto& blocks = manifest.at("blocks");
    if (blocks.size() != net.parameters().blocks().size()) throw ShapeError("parameter file: block list mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = net.parameters().blocks()[i];
        if (blocks[i].at("weight").get<Shape>() != b.weight.shape() ||
            blocks[i].at("bias").get<Shape>() != b.bias.shape())
            throw ShapeError("parameter file: block " + std::to_string(i) + " shape mismatch");
    }
    std::vector<double> flat(count);
    for (auto& v : flat) {
        char buf[8];
        if (!in.read(buf, 8)) throw std::runtime_error("parameter file: truncated payload");
        std::uint64_t bits;
        std::memcpy(&bits, buf, 8);
        v = std::bit_cast<double>(to_le(bits));
    }
    net.parameters().assign_flat(flat);
    return net;
}

void save_network(const std::filesystem::path& path, const Network& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_network(out, net);
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_network(in);
}

}  // namespace crl::numerics
