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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ldg/errors.hpp"
#include "ldg/measures.hpp"
#include "ldg/rates.hpp"
#include "ldg/rng.hpp"

using namespace ldg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Atom atom(std::size_t a, std::vector<std::uint64_t> ell) { return Atom{a, DegreeVector(std::move(ell))}; }

// Reference J, summed term by term from the Poisson pmf.
double reference_J(const PairMeasure& varpi, const NeighborhoodMeasure& nu, const ColorMeasure& mu,
                   const Kernel& k) {
  const std::size_t m = mu.m();
  std::vector<double> nu1(m, 0.0);
  for (const auto& [at, p] : nu.atoms()) nu1[at.color] += p;
  double color = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    if (nu1[a] > 0) color += nu1[a] * std::log(nu1[a] / mu[a]);
  double pair = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double ref = k(a, b) * nu1[a] * nu1[b];
      const double v = varpi(a, b);
      pair += (v > 0 ? v * std::log(v / ref) : 0.0) + ref - v;
    }
  }
  double neigh = 0.0;
  for (const auto& [at, p] : nu.atoms()) {
    double lq = std::log(nu1[at.color]);
    for (std::size_t b = 0; b < m; ++b) {
      const double lam = varpi(at.color, b) / nu1[at.color];
      const double l = double(at.ell[b]);
      lq += -lam + (l > 0 ? l * std::log(lam) : 0.0) - std::lgamma(l + 1);
    }
    neigh += p * (std::log(p) - lq);
  }
  return neigh + color + 0.5 * pair;
}

// Fixed point by damped iteration, independent of the library's bisection.
double damped_fixed_point(double mean, double c) {
  double x = c;
  for (int i = 0; i < 200000; ++i) {
    const double next = c * std::exp(-2.0 * (1.0 - mean / x));
    x = 0.5 * x + 0.5 * next;
  }
  return x;
}

DegreeDistribution shifted_poisson(double lambda, double extra_zero) {
  auto d = poisson_law(lambda);
  for (auto& p : d.pmf) p *= 1.0 - extra_zero;
  d.pmf[0] += extra_zero;
  return d;
}

}  // namespace

TEST_CASE("h_C closed values") {
  CHECK(h_c(PairMeasure(1, {1.0}), ColorMeasure({1}), Kernel(1, {2})) ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  CHECK(h_c(PairMeasure(1, {2.0}), ColorMeasure({1}), Kernel(1, {2})) == doctest::Approx(0.0));
  const ColorMeasure w({0.3, 0.7});
  const Kernel k(2, {1, 2, 2, 0.5});
  CHECK(std::abs(h_c(product_kernel_measure(k, w), w, k)) < 1e-15);
  CHECK(h_c(PairMeasure(2, {0, 1, 1, 0}), w, Kernel(2, {1, 0, 0, 1})) == kInf);
}

TEST_CASE("J vanishes at the limit law") {
  const ColorMeasure mu({0.5, 0.5});
  const Kernel k(2, {2, 1, 1, 3});
  const auto r = rate_J(product_kernel_measure(k, mu), poisson_limit_law(mu, k), mu, k);
  CHECK(r.finite());
  CHECK(r.value <= 1e-9);
  CHECK(r.value >= 0.0);
}

TEST_CASE("J matches the reference sum and is nonnegative") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 3;
    std::vector<double> w(m), kv(m * m);
    double total = 0;
    for (auto& x : w) total += (x = 0.2 + rng.uniform());
    for (auto& x : w) x /= total;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) kv[a * m + b] = kv[b * m + a] = 0.5 + 3 * rng.uniform();
    const ColorMeasure mu(w);
    const Kernel k(m, kv);
    // A random nu on small degree vectors, then varpi dominating phi_2(nu).
    NeighborhoodMeasure nu(m);
    std::vector<double> masses;
    std::vector<Atom> atoms;
    double mass = 0;
    for (int i = 0; i < 6; ++i) {
      std::vector<std::uint64_t> ell(m);
      for (auto& l : ell) l = rng.below(4);
      atoms.push_back(atom(rng.below(m), ell));
      masses.push_back(0.1 + rng.uniform());
      mass += masses.back();
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) nu.add(atoms[i], masses[i] / mass);
    const auto p2 = phi(nu).pairs;
    std::vector<double> v(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b)
        v[a * m + b] = v[b * m + a] = std::max(p2(a, b), p2(b, a)) + 0.3 * rng.uniform();
    const PairMeasure varpi(m, v);
    const auto r = rate_J(varpi, nu, mu, k);
    const double ref = reference_J(varpi, nu, mu, k);
    if (std::isfinite(ref)) {
      CHECK(r.value == doctest::Approx(ref).epsilon(1e-10));
      double sum = 0;
      for (const auto& [name, x] : r.breakdown) sum += x;
      CHECK(sum == doctest::Approx(r.value).epsilon(1e-12));
    } else {
      CHECK_FALSE(r.finite());
    }
    CHECK(r.value >= 0.0);
  }
}

TEST_CASE("J is infinite off sub-consistency") {
  NeighborhoodMeasure nu(1);
  nu.add(atom(0, {5}), 1.0);
  const auto r = rate_J(PairMeasure(1, {1.0}), nu, ColorMeasure({1}), Kernel(1, {1}));
  CHECK(r.value == kInf);
  CHECK(r.reason == "not_sub_consistent");
}

TEST_CASE("I and I_omega") {
  const ColorMeasure mu({0.4, 0.6});
  const Kernel k(2, {2, 1, 1, 3});
  CHECK(std::abs(rate_I(mu, product_kernel_measure(k, mu), mu, k).value) < 1e-15);
  const ColorMeasure w({0.5, 0.5});
  const PairMeasure v(2, {1, 0.2, 0.2, 0.5});
  const auto r = rate_I(w, v, mu, k);
  CHECK(r.value == doctest::Approx(relative_entropy(w, mu) + rate_I_omega(v, w, k)).epsilon(1e-14));
  CHECK(rate_I_omega(v, w, k) > 0.0);
  CHECK(rate_I(ColorMeasure({1, 0}), v, mu, k).value == kInf);
}

TEST_CASE("J tilde") {
  const ColorMeasure w({0.5, 0.5});
  const Kernel k(2, {2, 1, 1, 3});
  const auto varpi = product_kernel_measure(k, w);
  const auto q = poisson_limit_law(w, k);
  CHECK(rate_J_tilde(q, w, varpi) < 1e-9);
  CHECK(rate_J_tilde(q, ColorMeasure({0.4, 0.6}), varpi) == kInf);
  NeighborhoodMeasure heavy(2);
  heavy.add(atom(0, {9, 0}), 0.5);
  heavy.add(atom(1, {0, 0}), 0.5);
  CHECK(rate_J_tilde(heavy, w, varpi) == kInf);
}

TEST_CASE("degree rate closed points") {
  for (double c : {1.0, 2.0, 4.0}) {
    CHECK(rate_delta(poisson_law(c), c) <= 1e-10);
    DegreeDistribution zero{{1.0}, false};
    CHECK(rate_delta(zero, c) == doctest::Approx(0.5 * c * (1.0 - std::exp(-2.0))).epsilon(1e-12));
  }
  DegreeDistribution inf_mean{{0.5, 0.5}, true};
  CHECK(rate_delta(inf_mean, 2.0) == kInf);
}

TEST_CASE("degree rate uses the fixed point below the mean") {
  const double c = 3.0;
  for (double lambda : {0.5, 1.0, 2.0, 2.9}) {
    const auto d = shifted_poisson(lambda, 0.1);
    const double mean = d.mean();
    const double x = damped_fixed_point(mean, c);
    CHECK(x == doctest::Approx(solve_degree_fixed_point(mean, c).value).epsilon(1e-9));
    CHECK(rate_delta(d, c) == doctest::Approx(delta_at(d, c, x)).epsilon(1e-10));
  }
  const auto above = poisson_law(4.0);
  CHECK(rate_delta(above, c) == doctest::Approx(delta_at(above, c, above.mean())).epsilon(1e-12));
}

TEST_CASE("degree rate is continuous across mean = c") {
  const double c = 2.0;
  // Poisson mixtures with mean just below and just above c.
  const auto lo = shifted_poisson(c * (1 - 1e-12) / (1 - 1e-12), 0.0);
  const double below = rate_delta(poisson_law(c - 1e-11), c);
  const double above = rate_delta(poisson_law(c + 1e-11), c);
  CHECK(std::abs(below - above) < 1e-10);
  CHECK(rate_delta(lo, c) < 1e-10);
}

TEST_CASE("fixed point residual") {
  for (double c : {0.5, 1.0, 3.0, 10.0}) {
    for (double frac : {0.0, 0.1, 0.5, 0.99, 1.0}) {
      const double mean = frac * c;
      const auto r = solve_degree_fixed_point(mean, c);
      CHECK(r.converged);
      CHECK(std::abs(r.value - c * std::exp(-2.0 * (1.0 - mean / r.value))) <= 1e-12 * std::max(1.0, c));
    }
  }
  CHECK_THROWS_AS(solve_degree_fixed_point(3.0, 2.0), DomainError);
}

TEST_CASE("edge rate: general solver matches the closed form") {
  CHECK(rate_zeta_er(1.5, 2.0) == doctest::Approx(1.5 * std::log(1.5) - 0.5).epsilon(1e-14));
  CHECK(rate_zeta_er(1.5, 2.0) == doctest::Approx(0.108198).epsilon(1e-5));
  CHECK(rate_zeta_er(1.0, 2.0) == doctest::Approx(0.0));
  for (double x : {0.5, 1.0, 1.5, 3.0}) {
    const auto one = rate_zeta(x, ColorMeasure({1}), Kernel(1, {2}));
    CHECK(std::abs(one.value - rate_zeta_er(x, 2.0)) <= 1e-8);
    const auto two = rate_zeta(x, ColorMeasure({0.3, 0.7}), Kernel::constant(2, 2.0));
    CHECK(std::abs(two.value - rate_zeta_er(x, 2.0)) <= 1e-8);
    CHECK(two.reason.empty());
  }
}

TEST_CASE("edge rate of an inhomogeneous kernel") {
  const ColorMeasure mu({0.5, 0.5});
  const Kernel k(2, {2, 1, 1, 3});
  // Zero at the typical edge density |C mu x mu| / 2.
  const double typical = 0.5 * product_kernel_measure(k, mu).total_mass();
  CHECK(rate_zeta(typical, mu, k).value < 1e-8);
  double prev = 0.0;
  for (double x : {1.0, 1.2, 1.5, 2.0, 3.0}) {
    const double v = rate_zeta(x, mu, k).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // Frozen; the two-colour scan in test_varsolve reproduces it independently.
  CHECK(rate_zeta(1.5, mu, k).value == doctest::Approx(0.160435498484801).epsilon(1e-8));
}

TEST_CASE("poisson laws") {
  const auto d = poisson_law(3.0);
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(d.mean() == doctest::Approx(3.0).epsilon(1e-12));
  const auto mix = poisson_mixture_degree_law(ColorMeasure({0.5, 0.5}), Kernel(2, {2, 1, 1, 3}));
  CHECK(mix.mean() == doctest::Approx(0.5 * 1.5 + 0.5 * 2.0).epsilon(1e-12));
}
