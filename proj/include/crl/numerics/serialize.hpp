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
#include <iosfwd>

#include "crl/numerics/network.hpp"

namespace crl::numerics {

// Parameter file: one line of JSON manifest (architecture, input shape, block
// shapes, value count) terminated by '\n', followed by all parameters as
// little-endian IEEE-754 binary64 in ParameterSet::flatten() order.
void write_network(std::ostream& out, const Network& net);
Network read_network(std::istream& in);

void save_network(const std::filesystem::path& path, const Network& net);
Network load_network(const std::filesystem::path& path);

}  // namespace crl::numerics
