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

#include "crl/harness/snapshot.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crl/numerics/serialize.hpp"
#include "json.hpp"

namespace crl::harness {

using nlohmann::json;

std::filesystem::path save_snapshot(const std::filesystem::path& stem, SnapshotHeader header, const Policy& policy) {
    const std::filesystem::path dir = stem.parent_path();
    const std::string base = stem.filename().string();
    header.agent_kind = policy.kind();
    if (const auto* tab = dynamic_cast<const TabularPolicy*>(&policy)) {
        header.payload = base + ".qtable.csv";
        header.state_bins = tab->bins();
        std::ofstream out(dir / header.payload);
        out << tab->table().to_csv();
        if (!out) throw std::runtime_error("cannot write " + (dir / header.payload).string());
    } else if (const auto* net = dynamic_cast<const NetworkPolicy*>(&policy)) {
        header.payload = base + ".params";
        header.frame_stack = net->frame_stack();
        numerics::save_network(dir / header.payload, net->network());
    } else {
        throw std::invalid_argument("save_snapshot: only frozen policies can be stored");
    }

    json j;
    j["agent_kind"] = to_string(header.agent_kind);
    j["config_hash"] = header.config_hash;
    j["subtask_id"] = header.subtask_id;
    j["step"] = header.step;
    j["state_bins"] = header.state_bins;
    j["frame_stack"] = header.frame_stack;
    j["reset_noise"] = header.reset_noise;
    j["payload"] = header.payload;
    const std::filesystem::path path = dir / (base + ".json");
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return path;
}

Snapshot load_snapshot(const std::filesystem::path& header_path) {
    std::ifstream in(header_path);
    if (!in) throw std::runtime_error("cannot open snapshot " + header_path.string());
    const json j = json::parse(in);
    Snapshot s;
    s.header.agent_kind = agent_kind_from_string(j.at("agent_kind").get<std::string>());
    s.header.config_hash = j.at("config_hash").get<std::string>();
    s.header.subtask_id = j.at("subtask_id").get<int>();
    s.header.step = j.at("step").get<std::size_t>();
    s.header.state_bins = j.at("state_bins").get<std::size_t>();
    s.header.frame_stack = j.at("frame_stack").get<std::size_t>();
    s.header.reset_noise = j.at("reset_noise").get<double>();
    s.header.payload = j.at("payload").get<std::string>();

    const std::filesystem::path payload = header_path.parent_path() / s.header.payload;
    if (s.header.agent_kind == AgentKind::qtable) {
        std::ifstream p(payload);
        if (!p) throw std::runtime_error("cannot open snapshot payload " + payload.string());
        std::stringstream buf;
        buf << p.rdbuf();
        agents::QTable table = agents::QTable::from_csv(buf.str());
        if (table.states() != s.header.state_bins || table.actions() != sim::kActionCount)
            throw std::runtime_error("snapshot payload shape does not match its header");
        s.policy = std::make_unique<TabularPolicy>(std::move(table), s.header.state_bins);
    } else {
        numerics::Network net = numerics::load_network(payload);
        s.policy = std::make_unique<NetworkPolicy>(std::move(net), s.header.frame_stack);
    }
    return s;
}

}  // namespace crl::harness
