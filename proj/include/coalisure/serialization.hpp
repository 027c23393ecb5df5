// Copyright 2026 The Coalisure Authors
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

#ifndef COALISURE_SERIALIZATION_HPP_
#define COALISURE_SERIALIZATION_HPP_

#include <json.hpp>

#include <string>
#include <vector>

#include "coalisure/compression.hpp"
#include "coalisure/game.hpp"
#include "coalisure/risk.hpp"
#include "coalisure/sampling.hpp"
#include "coalisure/scenario_core.hpp"
#include "coalisure/validation.hpp"
#include "coalisure/zeta_core.hpp"

namespace coalisure {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Readers throw std::invalid_argument on any schema violation. Coalitions
// are written as ascending 1-based member lists; agent and sample indices
// are 1-based in every document.

Json coalition_to_json(Coalition s);
Coalition coalition_from_json(const Json& j, int n_agents);

Json to_json(const GameSpec& spec);
GameSpec game_from_json(const Json& j);

Json to_json(const DistributionSpec& dist);
DistributionSpec distribution_from_json(const Json& j);

Json to_json(const ScenarioCoreDesc& core);
Json to_json(const CompressionSet& set);
Json to_json(const RiskCertificate& cert);
Json to_json(const ZetaSolution& sol);
Json to_json(const ViolationEstimate& est);
Json to_json(const CoverageReport& report);

// One row per trial.
void write_coverage_csv(std::ostream& out, const CoverageReport& report);

// Deterministic text form: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace coalisure

#endif  // COALISURE_SERIALIZATION_HPP_
