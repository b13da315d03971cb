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

#include <filesystem>
#include <vector>

#include "crl/replay/transition.hpp"

namespace crl::replay {

// One JSON object per line:
//   {"subtask":1,"action":2,"reward":0.4,"terminal":false,
//    "state_index":16,"next_state_index":17,
//    "state":{"offset":0,"length":1500},"next_state":{"offset":1500,"length":1500}}
// Pixel stacks live in the sidecar binary file as raw bytes at `offset`.
void write_buffer_dump(const std::filesystem::path& jsonl, const std::filesystem::path& sidecar,
                       const std::vector<const Transition*>& items);
std::vector<Transition> read_buffer_dump(const std::filesystem::path& jsonl, const std::filesystem::path& sidecar);

}  // namespace crl::replay
