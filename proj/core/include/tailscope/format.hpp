// Copyright 2026 The Tailscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string>

namespace tailscope {

/// Decimal rendering with `significant` significant digits (%.*g style).
/// 17 digits round-trip every double.
std::string format_number(double value, int significant = 17);

/// Shortest decimal that parses back to the same double.
std::string format_shortest(double value);

/// Parses a full string as a double; false on trailing garbage or overflow.
bool parse_number(const std::string& text, double& value);

}  // namespace tailscope
