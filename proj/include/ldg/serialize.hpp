// Copyright 2026 The ldgraph Authors.
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

// JSON encodings of the library's value types.

#include <json.hpp>
#include <string>
#include <string_view>

#include "ldg/graphs.hpp"
#include "ldg/mcharness.hpp"
#include "ldg/measures.hpp"
#include "ldg/oracles.hpp"
#include "ldg/rates.hpp"
#include "ldg/varsolve.hpp"

namespace ldg::io {

using Json = nlohmann::ordered_json;

// Parses text, reporting syntax errors as "<source>:<line>:<col>: ...".
Json parse_json(std::string_view text, std::string_view source);
Json read_json_file(const std::string& path);

// Real numbers with +inf encoded as the string "inf".
Json real(double v);
double real_from(const Json& j, const char* what);

Json to_json(const ColorMeasure& mu);
Json to_json(const PairMeasure& varpi);
Json to_json(const NeighborhoodMeasure& nu);
Json to_json(const DegreeDistribution& d);
Json to_json(const ColorCounts& c);
Json to_json(const PairCounts& c);
Json to_json(const NeighborhoodCounts& c);
Json to_json(const RateValue& r);
Json to_json(const SolveReport& r);
Json to_json(const ExponentEstimate& e);
Json to_json(const LlnReport& r);
Json to_json(const PartitionBoundReport& r);
Json to_json(const SupportBoundReport& r);
Json to_json(const ApproximationReport& r);
Json to_json(const EmpiricalMeasures& em);

ColorMeasure color_measure_from(const Json& j);
PairMeasure pair_measure_from(const Json& j);
NeighborhoodMeasure neighborhood_measure_from(const Json& j);
DegreeDistribution degree_distribution_from(const Json& j);
ColorCounts color_counts_from(const Json& j);
PairCounts pair_counts_from(const Json& j);
NeighborhoodCounts neighborhood_counts_from(const Json& j);
Kernel kernel_from(const Json& rows);

// {"m": .., "mu": [..], "C": [[..]]}
struct Model {
  ColorMeasure mu;
  Kernel kernel;
};
Model model_from(const Json& j);
Json to_json(const Model& model);

}  // namespace ldg::io
