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

#include "ldg/rates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// log of the Poisson(lambda) probability of k.
double log_poisson(double lambda, std::uint64_t k) {
  if (lambda == 0.0) return k == 0 ? 0.0 : -kInf;
  const double kd = static_cast<double>(k);
  return -lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0);
}

void require_same_alphabet(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": alphabet mismatch");
}

// Calls visit(ell) for every degree vector in m colours with |ell| <= max_magnitude.
void for_each_degree_vector(std::size_t m, std::uint64_t max_magnitude,
                            const std::function<void(const DegreeVector&)>& visit) {
  DegreeVector ell = DegreeVector::zero(m);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t b, std::uint64_t left) {
    if (b + 1 == m) {
      for (std::uint64_t k = 0; k <= left; ++k) {
        ell.counts[b] = k;
        visit(ell);
      }
      ell.counts[b] = 0;
      return;
    }
    for (std::uint64_t k = 0; k <= left; ++k) {
      ell.counts[b] = k;
      rec(b + 1, left - k);
    }
    ell.counts[b] = 0;
  };
  rec(0, max_magnitude);
}

// Smallest K with P(Poisson(lambda) > K) <= tail.
std::uint64_t poisson_cutoff(double lambda, double tail) {
  if (lambda == 0.0) return 0;
  double cdf = 0.0;
  for (std::uint64_t k = 0;; ++k) {
    cdf += std::exp(log_poisson(lambda, k));
    if (1.0 - cdf <= tail && static_cast<double>(k) >= lambda) return k;
    if (k > 100000) throw ResourceError("poisson cutoff: intensity too large");
  }
}

}  // namespace

bool RateValue::finite() const { return std::isfinite(value); }

RateValue RateValue::infinite(std::string reason) {
  RateValue r;
  r.value = kInf;
  r.reason = std::move(reason);
  return r;
}

double h_c(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel) {
  require_same_alphabet(varpi.m(), omega.m(), "h_C");
  require_same_alphabet(varpi.m(), kernel.m(), "h_C");
  omega.require_probability("h_C: omega");
  const PairMeasure base = product_kernel_measure(kernel, omega);
  const double h = relative_entropy(varpi, base);
  if (!std::isfinite(h)) return kInf;
  // Clamp the rounding residue of an exact zero.
  return std::max(0.0, h + base.total_mass() - varpi.total_mass());
}

double log_q(const PairMeasure& varpi, const ColorMeasure& nu1, const Atom& atom) {
  const std::size_t m = varpi.m();
  require_same_alphabet(m, nu1.m(), "Q");
  require_same_alphabet(m, atom.ell.m(), "Q");
  if (atom.color >= m) throw ShapeError("Q: colour out of range");
  const double mass = nu1[atom.color];
  if (!(mass > 0.0)) return -kInf;
  double lq = std::log(mass);
  for (std::size_t b = 0; b < m; ++b) lq += log_poisson(varpi(atom.color, b) / mass, atom.ell[b]);
  return lq;
}

NeighborhoodMeasure q_measure(const PairMeasure& varpi, const ColorMeasure& nu1,
                              const std::vector<Atom>& support) {
  NeighborhoodMeasure q(varpi.m());
  for (const Atom& atom : support) {
    if (q.mass(atom) > 0.0) continue;
    const double lq = log_q(varpi, nu1, atom);
    if (lq > -kInf) q.add(atom, std::exp(lq));
  }
  return q;
}

double neighborhood_cost(const PairMeasure& varpi, const NeighborhoodMeasure& nu) {
  require_same_alphabet(varpi.m(), nu.m(), "neighbourhood cost");
  const ColorMeasure nu1 = phi(nu).colors;
  double h = 0.0;
  for (const auto& [atom, mass] : nu.atoms()) {
    const double lq = log_q(varpi, nu1, atom);
    if (lq == -kInf) return kInf;
    h += mass * (std::log(mass) - lq);
  }
  return std::max(0.0, h);
}

RateValue rate_J(const PairMeasure& varpi, const NeighborhoodMeasure& nu, const ColorMeasure& mu,
                 const Kernel& kernel) {
  require_same_alphabet(varpi.m(), nu.m(), "J");
  require_same_alphabet(varpi.m(), mu.m(), "J");
  require_same_alphabet(varpi.m(), kernel.m(), "J");
  mu.require_probability("J: mu");
  nu.require_probability("J: nu");
  if (!is_sub_consistent(varpi, nu)) return RateValue::infinite("not_sub_consistent");

  const ColorMeasure nu1 = phi(nu).colors;
  const double color = relative_entropy(nu1, mu);
  const double pair = 0.5 * h_c(varpi, nu1, kernel);
  const double neighborhood = neighborhood_cost(varpi, nu);
  if (!std::isfinite(color)) return RateValue::infinite("color_cost_infinite");
  if (!std::isfinite(pair)) return RateValue::infinite("pair_cost_infinite");
  if (!std::isfinite(neighborhood)) return RateValue::infinite("neighborhood_cost_infinite");
  RateValue r;
  r.breakdown = {{"color", color}, {"pair", pair}, {"neighborhood", neighborhood}};
  r.value = color + pair + neighborhood;
  return r;
}

RateValue rate_I(const ColorMeasure& omega, const PairMeasure& varpi, const ColorMeasure& mu,
                 const Kernel& kernel) {
  require_same_alphabet(omega.m(), mu.m(), "I");
  omega.require_probability("I: omega");
  mu.require_probability("I: mu");
  const double color = relative_entropy(omega, mu);
  const double pair = 0.5 * h_c(varpi, omega, kernel);
  if (!std::isfinite(color)) return RateValue::infinite("color_cost_infinite");
  if (!std::isfinite(pair)) return RateValue::infinite("pair_cost_infinite");
  RateValue r;
  r.breakdown = {{"color", color}, {"pair", pair}};
  r.value = color + pair;
  return r;
}

double rate_I_omega(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel) {
  return 0.5 * h_c(varpi, omega, kernel);
}

double rate_J_tilde(const NeighborhoodMeasure& nu, const ColorMeasure& omega, const PairMeasure& varpi) {
  require_same_alphabet(nu.m(), omega.m(), "J~");
  require_same_alphabet(nu.m(), varpi.m(), "J~");
  omega.require_probability("J~: omega");
  if (!is_sub_consistent(varpi, nu)) return kInf;
  const ColorMeasure nu1 = phi(nu).colors;
  for (std::size_t a = 0; a < omega.m(); ++a) {
    if (std::abs(nu1[a] - omega[a]) > kMeasureTol) return kInf;
  }
  return neighborhood_cost(varpi, nu);
}

double delta_at(const DegreeDistribution& d, double c, double x) {
  double h = 0.0;
  for (std::size_t k = 0; k < d.pmf.size(); ++k) {
    const double p = d.pmf[k];
    if (p == 0.0) continue;
    const double lq = log_poisson(x, k);
    if (lq == -kInf) return kInf;
    h += p * (std::log(p) - lq);
  }
  const double head = x > 0.0 ? 0.5 * x * std::log(x / c) - 0.5 * x + 0.5 * c : 0.5 * c;
  return head + h;
}

double rate_delta(const DegreeDistribution& d, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("delta: c must be positive");
  if (d.infinite_mean) return kInf;
  for (double p : d.pmf) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("delta: pmf entries must be finite and nonnegative");
  }
  if (std::abs(d.total_mass() - 1.0) > 1e-9) throw DomainError("delta: degree law must have total mass 1");
  const double mean = d.mean();
  const double x = mean <= c ? solve_degree_fixed_point(mean, c).value : mean;
  return std::max(0.0, delta_at(d, c, x));
}

RateValue rate_zeta(double x, const ColorMeasure& mu, const Kernel& kernel, const PsiOptions& options) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("zeta: x must be finite and nonnegative");
  const SolveReport inner = zeta_inner(x, mu, kernel, options);
  if (!std::isfinite(inner.value)) return RateValue::infinite("inner_infimum_infinite");
  RateValue r;
  const double outer = xlogx(x) - x;
  r.breakdown = {{"x log x - x", outer}, {"inner", inner.value}};
  r.value = outer + inner.value;
  if (!inner.converged) r.reason = "not_converged";
  return r;
}

double rate_zeta_er(double x, double c) {
  if (!(c > 0.0)) throw DomainError("zeta: c must be positive");
  if (!(x >= 0.0)) throw DomainError("zeta: x must be nonnegative");
  return xlogx(x) - x - (x > 0.0 ? x * std::log(0.5 * c) : 0.0) + 0.5 * c;
}

DegreeDistribution poisson_law(double lambda, double tail) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("poisson law: bad intensity");
  DegreeDistribution d;
  const std::uint64_t cutoff = poisson_cutoff(lambda, tail);
  for (std::uint64_t k = 0; k <= cutoff; ++k) d.pmf.push_back(std::exp(log_poisson(lambda, k)));
  return d;
}

NeighborhoodMeasure poisson_limit_law(const ColorMeasure& mu, const Kernel& kernel, double tail) {
  require_same_alphabet(mu.m(), kernel.m(), "limit law");
  mu.require_probability("limit law: mu");
  const std::size_t m = mu.m();
  NeighborhoodMeasure q(m);
  for (std::size_t a = 0; a < m; ++a) {
    if (mu[a] == 0.0) continue;
    std::vector<double> lambda(m);
    double total = 0.0;
    for (std::size_t b = 0; b < m; ++b) total += (lambda[b] = kernel(a, b) * mu[b]);
    const std::uint64_t cutoff = poisson_cutoff(total, tail);
    std::vector<std::pair<DegreeVector, double>> atoms;
    double kept = 0.0;
    for_each_degree_vector(m, cutoff, [&](const DegreeVector& ell) {
      double lp = 0.0;
      for (std::size_t b = 0; b < m; ++b) lp += log_poisson(lambda[b], ell[b]);
      if (lp == -kInf) return;
      const double p = std::exp(lp);
      kept += p;
      atoms.emplace_back(ell, p);
    });
    for (const auto& [ell, p] : atoms) q.add(Atom{a, ell}, mu[a] * p / kept);
  }
  return q;
}

DegreeDistribution poisson_mixture_degree_law(const ColorMeasure& mu, const Kernel& kernel, double tail) {
  require_same_alphabet(mu.m(), kernel.m(), "degree law");
  DegreeDistribution mix;
  for (std::size_t a = 0; a < mu.m(); ++a) {
    if (mu[a] == 0.0) continue;
    double lambda = 0.0;
    for (std::size_t b = 0; b < mu.m(); ++b) lambda += kernel(a, b) * mu[b];
    const DegreeDistribution d = poisson_law(lambda, tail);
    if (mix.pmf.size() < d.pmf.size()) mix.pmf.resize(d.pmf.size(), 0.0);
    for (std::size_t k = 0; k < d.pmf.size(); ++k) mix.pmf[k] += mu[a] * d.pmf[k];
  }
  return mix;
}

}  // namespace ldg
