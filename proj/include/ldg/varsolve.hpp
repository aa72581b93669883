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

#include <cstddef>
#include <span>
#include <vector>

#include "ldg/measures.hpp"

namespace ldg {

struct SolveReport {
  std::vector<double> argument;  // argmin / argmax
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Root of x = c exp(-2 (1 - mean / x)) on [max(mean, c e^-2), c], by bisection.
// Requires 0 <= mean <= c.
SolveReport solve_degree_fixed_point(double mean, double c);

// Minimum and maximum of w^T C w over probability vectors w supported on supp(mu).
struct QuadraticRange {
  double min = 0.0;
  double max = 0.0;
  std::vector<double> argmin;
  std::vector<double> argmax;
};
QuadraticRange attainable_range(const ColorMeasure& mu, const Kernel& kernel);

struct PsiOptions {
  int starts = 32;
  double constraint_tol = 1e-8;
};

// inf H(w | mu) subject to w^T C w = y; +inf outside the attainable range.
// `argument` holds the minimising w.
SolveReport psi(double y, const ColorMeasure& mu, const Kernel& kernel, const PsiOptions& options = {});

// inf_{y > 0} { psi(y) - x log(y/2) + y/2 }; `argument` = {y}.
SolveReport zeta_inner(double x, const ColorMeasure& mu, const Kernel& kernel,
                       const PsiOptions& options = {});

// Objective of the annealed Ising problem at (x, w(+,+), w(-,-), w(+,-)).
double ising_objective(double beta, double c, std::span<const double> point);

struct IsingOptions {
  int grid = 40;
  double tolerance = 1e-10;
};

// Limit of (1/n) log E Z(beta) on the sparse Erdos-Renyi graph with mean
// degree c; `argument` = {x, w(+,+), w(-,-), w(+,-)}.
SolveReport ising_annealed(double beta, double c, const IsingOptions& options = {});

struct LegendreOptions {
  double box = 60.0;  // g(a, b) clipped to [-box, box]
  int max_sweeps = 200;
  double tolerance = 1e-15;
};

// (1/2) sup_g { <varpi, g> + <C w (x) w, 1 - e^g> } over symmetric g, by
// coordinate ascent. +inf when varpi charges a zero of C w (x) w.
double legendre_i_omega(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel,
                        const LegendreOptions& options = {});

}  // namespace ldg
