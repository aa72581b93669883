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

#include <string>
#include <utility>
#include <vector>

#include "ldg/measures.hpp"
#include "ldg/varsolve.hpp"

namespace ldg {

// A rate value in [0, +inf]. Finite values equal the sum of `breakdown`;
// infinite values carry a reason code.
struct RateValue {
  double value = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;
  std::string reason;  // empty when finite and converged

  bool finite() const;
  static RateValue infinite(std::string reason);
};

// H(varpi | C w (x) w) + |C w (x) w| - |varpi|.
double h_c(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel);

// log Q[varpi, nu1](atom); -inf where the atom has probability zero
// (including colours with nu1(a) = 0).
double log_q(const PairMeasure& varpi, const ColorMeasure& nu1, const Atom& atom);

// Q[varpi, nu1] evaluated on the given atoms; zero atoms are dropped.
NeighborhoodMeasure q_measure(const PairMeasure& varpi, const ColorMeasure& nu1,
                              const std::vector<Atom>& support);

// H(nu | Q[varpi, nu_1]) summed over the support of nu.
double neighborhood_cost(const PairMeasure& varpi, const NeighborhoodMeasure& nu);

RateValue rate_J(const PairMeasure& varpi, const NeighborhoodMeasure& nu, const ColorMeasure& mu,
                 const Kernel& kernel);
RateValue rate_I(const ColorMeasure& omega, const PairMeasure& varpi, const ColorMeasure& mu,
                 const Kernel& kernel);
double rate_I_omega(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel);
double rate_J_tilde(const NeighborhoodMeasure& nu, const ColorMeasure& omega, const PairMeasure& varpi);

// The degree-distribution rate for sparse Erdos-Renyi graphs with mean degree c.
double rate_delta(const DegreeDistribution& d, double c);
// (1/2) x log(x/c) - x/2 + c/2 + H(d | Poisson(x)) at a given x.
double delta_at(const DegreeDistribution& d, double c, double x);

// Edges-per-vertex rate, via the general variational solver.
RateValue rate_zeta(double x, const ColorMeasure& mu, const Kernel& kernel,
                    const PsiOptions& options = {});
// Closed form for C = c: x log x - x - x log(c/2) + c/2.
double rate_zeta_er(double x, double c);

// Poisson(lambda) truncated where the remaining tail mass drops below `tail`.
DegreeDistribution poisson_law(double lambda, double tail = 1e-14);

// The limit law Q* of the neighbourhood measure: colour a ~ mu, then
// independent Poisson(C(a,b) mu(b)) neighbour counts. Per colour, degree
// vectors are truncated at the smallest magnitude whose Poisson tail is below
// `tail` and renormalised, so the result is a probability measure with
// phi_2 <= C mu (x) mu.
NeighborhoodMeasure poisson_limit_law(const ColorMeasure& mu, const Kernel& kernel, double tail = 1e-14);

// Limit law of the degree distribution: sum_a mu(a) Poisson(sum_b C(a,b) mu(b)).
DegreeDistribution poisson_mixture_degree_law(const ColorMeasure& mu, const Kernel& kernel,
                                              double tail = 1e-14);

}  // namespace ldg
