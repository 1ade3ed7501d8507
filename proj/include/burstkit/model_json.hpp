/*
   Copyright 2026 The burstkit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "burstkit/model.hpp"

namespace burstkit {

inline constexpr const char* kSchemaVersion = "burstkit/1";

using Json = nlohmann::json;

// Strict readers: unknown fields and wrong types raise SchemaError naming the
// offending field path (e.g. "spec.lambda1.kind").
RateFunction rate_from_json(const Json& j, const std::string& path);
BivariateRate bivariate_from_json(const Json& j, const std::string& path);
BurstDensity density_from_json(const Json& j, const std::string& path);
DiscreteModelSpec discrete_spec_from_json(const Json& j, const std::string& path);
ContinuousModelSpec continuous_spec_from_json(const Json& j, const std::string& path);

// Custom rates have no serial form and raise SchemaError.
Json to_json(const RateFunction& rate);
Json to_json(const BivariateRate& rate);
Json to_json(const BurstDensity& density);
Json to_json(const DiscreteModelSpec& spec);
Json to_json(const ContinuousModelSpec& spec);

using ModelSpec = std::variant<DiscreteModelSpec, ContinuousModelSpec>;

/// 64-bit FNV-1a, used to fingerprint specs and configs.
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t spec_hash(const ModelSpec& spec);

/// {"schema": "burstkit/1", "model": "discrete" | "continuous", "spec": {...}}
ModelSpec model_document_from_json(const Json& j);
Json model_document(const ModelSpec& spec);

}  // namespace burstkit
