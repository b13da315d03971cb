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

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

#include "crl/harness/config.hpp"
#include "crl/harness/policy.hpp"

namespace crl::harness {

// A stored policy is two files: `<stem>.json`, the header, and a payload
// next to it (`<stem>.qtable.csv` or `<stem>.params`). The header carries
// everything needed to rebuild the observer and the evaluation environment.
struct SnapshotHeader {
    AgentKind agent_kind = AgentKind::qtable;
    std::string config_hash;
    int subtask_id = 0;
    std::size_t step = 0;     // global iteration at which the policy was taken
    std::size_t state_bins = 33;
    std::size_t frame_stack = 3;
    double reset_noise = 0.0;
    std::string payload;      // file name relative to the header
};

struct Snapshot {
    SnapshotHeader header;
    std::unique_ptr<Policy> policy;
};

// Writes header and payload; returns the header path.
std::filesystem::path save_snapshot(const std::filesystem::path& stem, SnapshotHeader header, const Policy& policy);
Snapshot load_snapshot(const std::filesystem::path& header_path);

}  // namespace crl::harness
