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

#include "ldg/measures.hpp"
#include "ldg/oracles.hpp"
#include "ldg/rates.hpp"
#include "ldg/rng.hpp"
#include "ldg/varsolve.hpp"

using namespace ldg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double quad(const Kernel& k, double t) {
  const double s = 1.0 - t;
  return k(0, 0) * t * t + 2 * k(0, 1) * t * s + k(1, 1) * s * s;
}

double entropy2(double t, const ColorMeasure& mu) {
  auto term = [](double w, double m) { return w > 0 ? w * std::log(w / m) : 0.0; };
  return term(t, mu[0]) + term(1 - t, mu[1]);
}

// psi for m = 2 by solving the quadratic in t = w(0) exactly.
double psi_two_colours(double y, const ColorMeasure& mu, const Kernel& k) {
  const double A = k(0, 0) - 2 * k(0, 1) + k(1, 1);
  const double B = 2 * k(0, 1) - 2 * k(1, 1);
  const double C = k(1, 1) - y;
  std::vector<double> roots;
  if (std::abs(A) < 1e-14) {
    roots.push_back(-C / B);
  } else {
    const double disc = B * B - 4 * A * C;
    if (disc < 0) return kInf;
    roots.push_back((-B + std::sqrt(disc)) / (2 * A));
    roots.push_back((-B - std::sqrt(disc)) / (2 * A));
  }
  double best = kInf;
  for (double t : roots)
    if (t >= -1e-12 && t <= 1 + 1e-12) best = std::min(best, entropy2(std::clamp(t, 0.0, 1.0), mu));
  return best;
}

// zeta for m = 2 by a dense scan over w(0) and golden refinement.
double zeta_two_colours(double x, const ColorMeasure& mu, const Kernel& k) {
  auto f = [&](double t) {
    const double y = quad(k, t);
    return entropy2(t, mu) - x * std::log(y / 2) + y / 2;
  };
  const int N = 20000;
  int best = 0;
  for (int i = 1; i <= N; ++i)
    if (f(double(i) / N) < f(double(best) / N)) best = i;
  double lo = std::max(0.0, double(best - 1) / N), hi = std::min(1.0, double(best + 1) / N);
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (f(a) < f(b)) hi = b;
    else lo = a;
  }
  return x * std::log(x) - x + f(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("attainable range on two colours") {
  const Kernel k(2, {2, 1, 1, 3});
  const auto r = attainable_range(ColorMeasure({0.5, 0.5}), k);
  double lo = kInf, hi = -kInf;
  for (int i = 0; i <= 100000; ++i) {
    const double q = quad(k, i / 100000.0);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(r.min == doctest::Approx(lo).epsilon(1e-8));
  CHECK(r.max == doctest::Approx(hi).epsilon(1e-12));
  // A colour outside the support of mu is not available.
  const auto r1 = attainable_range(ColorMeasure({1, 0}), k);
  CHECK(r1.min == doctest::Approx(2.0));
  CHECK(r1.max == doctest::Approx(2.0));
}

TEST_CASE("psi against the two-colour closed solution") {
  const ColorMeasure mu({0.3, 0.7});
  const Kernel k(2, {2, 1, 1, 3});
  const auto range = attainable_range(mu, k);
  for (int i = 0; i <= 12; ++i) {
    const double y = range.min + (range.max - range.min) * (0.001 + 0.998 * i / 12.0);
    const auto r = psi(y, mu, k);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(psi_two_colours(y, mu, k)).epsilon(1e-8).scale(1e-9));
  }
  const double typical = quad(k, mu[0]);
  CHECK(std::abs(psi(typical, mu, k).value) < 1e-10);
  CHECK(psi(range.max * 1.01, mu, k).value == kInf);
  CHECK(psi(range.min * 0.99, mu, k).value == kInf);
}

TEST_CASE("psi on three colours is minimal over random feasible points") {
  const ColorMeasure mu({0.2, 0.3, 0.5});
  const Kernel k(3, {1, 2, 0.5, 2, 3, 1, 0.5, 1, 4});
  const double y = 2.3;
  const auto r = psi(y, mu, k);
  REQUIRE(r.converged);
  const auto& w = r.argument;
  double q = 0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) q += k(a, b) * w[a] * w[b];
  CHECK(q == doctest::Approx(y).epsilon(1e-8));
  // Random simplex points close to the constraint surface may not beat it.
  Rng rng(4);
  int near = 0;
  for (int t = 0; t < 200000; ++t) {
    std::vector<double> v(3);
    double s = 0;
    for (auto& x : v) s += (x = -std::log(rng.uniform_pos()));
    for (auto& x : v) x /= s;
    double qv = 0;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) qv += k(a, b) * v[a] * v[b];
    if (std::abs(qv - y) > 1e-4) continue;
    ++near;
    double h = 0;
    for (std::size_t a = 0; a < 3; ++a) h += v[a] * std::log(v[a] / mu[a]);
    CHECK(h >= r.value - 1e-3);
  }
  CHECK(near > 10);
}

TEST_CASE("edge rate against a two-colour scan") {
  const ColorMeasure mu({0.5, 0.5});
  const Kernel k(2, {2, 1, 1, 3});
  for (double x : {0.6, 1.0, 1.5, 2.5}) {
    CHECK(rate_zeta(x, mu, k).value == doctest::Approx(zeta_two_colours(x, mu, k)).epsilon(1e-8).scale(1e-9));
  }
  CHECK(zeta_two_colours(1.5, mu, k) == doctest::Approx(0.160435498484801).epsilon(1e-9));
}

TEST_CASE("annealed Ising free energy") {
  for (double c : {0.5, 1.0, 2.0}) {
    const auto zero = ising_annealed(0.0, c);
    CHECK(std::abs(zero.value - std::log(2.0)) <= 1e-10);
    double prev = zero.value;
    for (double beta : {0.1, 0.25, 0.5, 1.0, 1.5}) {
      const auto r = ising_annealed(beta, c);
      CHECK(r.converged);
      CHECK(std::abs(r.value - ising_oracle(beta, c).value) <= 1e-6);
      CHECK(r.value >= prev - 1e-12);
      prev = r.value;
      CHECK(ising_objective(beta, c, r.argument) == doctest::Approx(r.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("Legendre dual matches the entropy form") {
  Rng rng(8);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + t % 2;
    std::vector<double> w(m), kv(m * m), v(m * m);
    double s = 0;
    for (auto& x : w) s += (x = 0.1 + rng.uniform());
    for (auto& x : w) x /= s;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        kv[a * m + b] = kv[b * m + a] = 0.2 + 3 * rng.uniform();
        v[a * m + b] = v[b * m + a] = 2 * rng.uniform();
      }
    const ColorMeasure omega(w);
    const Kernel k(m, kv);
    const PairMeasure varpi(m, v);
    CHECK(legendre_i_omega(varpi, omega, k) == doctest::Approx(rate_I_omega(varpi, omega, k)).epsilon(1e-6).scale(1e-4));
  }
  // varpi charging a zero of C w (x) w.
  CHECK(legendre_i_omega(PairMeasure(2, {0, 1, 1, 0}), ColorMeasure({0.5, 0.5}), Kernel(2, {1, 0, 0, 1})) == kInf);
}
