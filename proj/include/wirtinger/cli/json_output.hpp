/*
 * Copyright 2026 The Wirtinger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include <json.hpp>

namespace wirtinger::cli {

using Json = nlohmann::ordered_json;

/// %.17g, so every double round-trips exactly. Non-finite values have no
/// JSON spelling and are rendered as null by dump().
std::string format_double(double v);

/// Deterministic serialization: insertion-ordered keys, two-space indent,
/// doubles via format_double, trailing newline.
std::string dump(const Json& value);

}  // namespace wirtinger::cli
