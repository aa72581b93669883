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

// Small dense optimisers used by the variational solvers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace ldg::detail {

using Vec = std::vector<double>;

struct MinimizeResult {
  Vec x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

// f(x, grad) returns the value and fills grad.
using ObjectiveWithGradient = std::function<double(const Vec&, Vec&)>;

// BFGS with Armijo backtracking.
MinimizeResult bfgs(const ObjectiveWithGradient& f, Vec x0, double gtol, int max_iter);

// Derivative-free simplex search; f may return +inf outside its domain.
MinimizeResult nelder_mead(const std::function<double(const Vec&)>& f, Vec x0, const Vec& step,
                           double ftol, double xtol, int max_iter);

struct Minimum1D {
  double x = 0.0;
  double f = 0.0;
  double width = 0.0;
  int iterations = 0;
};

// Golden-section minimisation on [lo, hi] until the bracket is below xtol.
Minimum1D golden_section(const std::function<double(double)>& f, double lo, double hi, double xtol,
                         int max_iter = 500);

// Scans `points` equispaced values on [lo, hi] and refines around the best by
// golden section.
Minimum1D scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int points,
                           double xtol);

}  // namespace ldg::detail
