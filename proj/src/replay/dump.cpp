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

#include "crl/replay/dump.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

#include "json.hpp"

namespace crl::replay {

using nlohmann::json;

void write_buffer_dump(const std::filesystem::path& jsonl, const std::filesystem::path& sidecar,
                       const std::vector<const Transition*>& items) {
    std::ofstream lines(jsonl);
    std::ofstream blob(sidecar, std::ios::binary);
    if (!lines || !blob) throw std::runtime_error("cannot write buffer dump to " + jsonl.string());
    std::uint64_t offset = 0;
    auto put = [&](const std::vector<std::uint8_t>& px) {
        json ref{{"offset", offset}, {"length", px.size()}};
        blob.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
        offset += px.size();
        return ref;
    };
    for (const auto* t : items) {
        json j;
        j["subtask"] = t->subtask;
        j["action"] = t->action;
        j["reward"] = t->reward;
        j["terminal"] = t->terminal;
        j["state_index"] = t->state.index;
        j["next_state_index"] = t->next_state.index;
        j["state"] = put(t->state.pixels);
        j["next_state"] = put(t->next_state.pixels);
        lines << j.dump() << '\n';
    }
    if (!lines || !blob) throw std::runtime_error("failed writing buffer dump");
}

std::vector<Transition> read_buffer_dump(const std::filesystem::path& jsonl, const std::filesystem::path& sidecar) {
    std::ifstream lines(jsonl);
    std::ifstream blob_in(sidecar, std::ios::binary);
    if (!lines || !blob_in) throw std::runtime_error("cannot read buffer dump " + jsonl.string());
    const std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(blob_in)), std::istreambuf_iterator<char>());
    auto get = [&](const json& ref) {
        const std::size_t off = ref.at("offset"), len = ref.at("length");
        if (off + len > blob.size()) throw std::runtime_error("buffer dump: reference past end of sidecar");
        return std::vector<std::uint8_t>(blob.begin() + static_cast<std::ptrdiff_t>(off),
                                         blob.begin() + static_cast<std::ptrdiff_t>(off + len));
    };
    std::vector<Transition> out;
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        Transition t;
        t.subtask = j.at("subtask");
        t.action = j.at("action");
        t.reward = j.at("reward");
        t.terminal = j.at("terminal");
        t.state.index = j.at("state_index");
        t.next_state.index = j.at("next_state_index");
        t.state.pixels = get(j.at("state"));
        t.next_state.pixels = get(j.at("next_state"));
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace crl::replay
