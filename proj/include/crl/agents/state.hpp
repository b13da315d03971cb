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

#include <cstdint>
#include <vector>

namespace crl::agents {

// Encoded observation. Tabular agents use `index` (a deviation bin); network
// agents use `pixels`, a (rows, cols, frames) stack quantized to 0..255.
struct State {
    std::uint32_t index = 0;
    std::vector<std::uint8_t> pixels;

    friend bool operator==(const State&, const State&) = default;
};

}  // namespace crl::agents
