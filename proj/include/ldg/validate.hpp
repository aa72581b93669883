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

// Numbered acceptance criteria, shared by the CLI and the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "ldg/serialize.hpp"

namespace ldg {

struct CriterionResult {
  int id = 0;
  std::string suite;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  io::Json metrics;
};

struct ValidationReport {
  std::vector<CriterionResult> results;
  io::Json resolved_config;
  bool all_passed() const;
};

// Suite names in criterion order: edge, mc, degree, ising, duality, zero,
// exact, conditional, approx, bounds, lln.
const std::vector<std::string>& validation_suites();

// Pinned tolerances. A config may tighten any of them; loosening one, or
// naming an unknown one, is a DomainError.
io::Json default_tolerances();

// Config keys (all optional): "suites": [names], "seed": u64, "threads": n,
// "tolerances": {...}, "mc": {"replicas": [r100, r200, r400],
// "importance_replicas": r}.
ValidationReport run_validation(const io::Json& config);

}  // namespace ldg
