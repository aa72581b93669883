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

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "ldg/errors.hpp"
#include "ldg/graphs.hpp"
#include "ldg/oracles.hpp"

using namespace ldg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unlimited coin-change DP over every nonzero vector below ell.
BigCount coin_partition_count(const std::vector<std::uint64_t>& ell) {
  const std::size_t m = ell.size();
  std::vector<std::uint64_t> stride(m, 1);
  std::uint64_t cells = 1;
  for (std::size_t b = 0; b < m; ++b) {
    stride[b] = cells;
    cells *= ell[b] + 1;
  }
  auto decode = [&](std::uint64_t idx) {
    std::vector<std::uint64_t> v(m);
    for (std::size_t b = 0; b < m; ++b) v[b] = (idx / stride[b]) % (ell[b] + 1);
    return v;
  };
  std::vector<BigCount> ways(cells, 0);
  ways[0] = 1;
  for (std::uint64_t coin = 1; coin < cells; ++coin) {
    const auto cv = decode(coin);
    for (std::uint64_t idx = 0; idx < cells; ++idx) {
      const auto v = decode(idx);
      bool fits = true;
      for (std::size_t b = 0; b < m; ++b) fits = fits && v[b] >= cv[b];
      if (fits) ways[idx] += ways[idx - coin];
    }
  }
  return ways[cells - 1];
}

double log_choose(double n, double k) { return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1); }

}  // namespace

TEST_CASE("binomial log tail against the regularised incomplete beta") {
  struct Case {
    std::uint64_t N;
    double p;
    std::uint64_t k;
  };
  for (const auto& c : {Case{10, 0.3, 0}, Case{10, 0.3, 3}, Case{10, 0.3, 8}, Case{1000, 0.002, 5},
                        Case{4950, 0.02, 150}, Case{19900, 0.01, 250}, Case{100, 0.5, 20}, Case{100, 0.5, 99}}) {
    const double ref = c.k == 0 ? 0.0 : std::log(boost::math::ibeta(double(c.k), double(c.N - c.k + 1), c.p));
    CHECK(binomial_log_tail(c.N, c.p, c.k) == doctest::Approx(ref).epsilon(1e-11));
  }
  CHECK(binomial_log_tail(10, 0.3, 11) == -kInf);
  // Deep tail beyond double range of the plain probability.
  const double deep = binomial_log_tail(1000000, 1e-6, 500);
  double ref = 0.0;
  {
    // Dominated by the first term; the ratio series converges fast.
    double term = log_choose(1e6, 500) + 500 * std::log(1e-6) + (1e6 - 500) * std::log1p(-1e-6);
    double s = 1.0, r = 1.0;
    for (std::uint64_t j = 500; j < 600; ++j) {
      r *= (1e6 - double(j)) / double(j + 1) * 1e-6 / (1 - 1e-6);
      s += r;
    }
    ref = term + std::log(s);
  }
  CHECK(deep == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("composition counts and their sandwich") {
  for (std::uint64_t parts = 1; parts <= 6; ++parts) {
    for (std::uint64_t j = 0; j <= 50; ++j) {
      const BigCount c = composition_count(j, parts);
      const double closed = boost::math::binomial_coefficient<double>(unsigned(j + parts - 1), unsigned(parts - 1));
      CHECK(c == BigCount(static_cast<std::uint64_t>(std::llround(closed))));
      CHECK(composition_sandwich_holds(j, parts, c));
    }
  }
  CHECK_FALSE(composition_sandwich_holds(10, 3, composition_count(10, 3) * 10));
}

TEST_CASE("scalar partition counts") {
  const auto p = scalar_partition_counts(100);
  const std::vector<int> head{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (std::size_t s = 0; s < head.size(); ++s) CHECK(p[s] == head[s]);
  CHECK(p[60] == BigCount(966467));
  CHECK(p[100] == BigCount(190569292));
  for (std::size_t s = 1; s <= 60; ++s)
    CHECK(std::log(static_cast<double>(p[s])) <= kScalarPartitionConstant * std::sqrt(double(s)));
}

TEST_CASE("vector partition counts") {
  CHECK(vector_partition_count(DegreeVector({1, 1})) == 2);
  CHECK(vector_partition_count(DegreeVector({0, 0})) == 1);
  CHECK(vector_partition_count(DegreeVector({2, 1})) == 4);
  const auto p = scalar_partition_counts(14);
  for (std::uint64_t s = 0; s <= 14; ++s) CHECK(vector_partition_count(DegreeVector({s})) == p[s]);
  for (const auto& ell : std::vector<std::vector<std::uint64_t>>{{3, 2}, {4, 4}, {2, 2, 2}, {5, 1, 3}, {7, 7}, {1, 1, 1, 1}})
    CHECK(vector_partition_count(DegreeVector(ell)) == coin_partition_count(ell));
  CHECK_THROWS_AS(vector_partition_count(DegreeVector({10, 5})), ResourceError);
}

TEST_CASE("partition bound report") {
  const auto rep = partition_bound_check(2, {1, 2, 4, 8});
  CHECK(rep.holds);
  REQUIRE(rep.vector_entries.size() == 4);
  for (const auto& e : rep.vector_entries) CHECK(e.theta_hat <= kThetaPerColor * 2);
  CHECK(rep.scalar_entries.size() == 61);
}

TEST_CASE("support bound holds on sampled graphs") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::uint64_t n = 20 + seed % 200;
    const auto g = sample_colored_graph(ModelParams(ColorMeasure({1}), Kernel(1, {1.0 + double(seed % 5)}), n), seed);
    const auto rep = support_bound_check(empirical_measures(g).neighborhoods);
    CHECK(rep.holds);
    CHECK(double(rep.support) <= rep.bound);
  }
  const auto c = support_bound_check(empirical_measures(sample_colored_graph(
                                         ModelParams(ColorMeasure({1}), Kernel(1, {2}), 50), 1))
                                         .neighborhoods);
  // m = 1: C = 2 Gamma(3)^(1/2) / Gamma(1), D = 2 * 2 / Gamma(1).
  CHECK(c.constant_c == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(c.constant_d == doctest::Approx(4.0));
}

TEST_CASE("Ising partition function by hand") {
  const double beta = 0.7;
  ColoredGraph edge{1, {0, 0}, {{0, 1}}};
  CHECK(ising_partition_function(edge, beta) == doctest::Approx(2 * std::exp(beta) + 2 * std::exp(-beta)));
  ColoredGraph empty{1, {0, 0, 0}, {}};
  CHECK(ising_partition_function(empty, beta) == doctest::Approx(8.0));
  ColoredGraph triangle{1, {0, 0, 0}, {{0, 1}, {0, 2}, {1, 2}}};
  CHECK(ising_partition_function(triangle, beta) == doctest::Approx(2 * std::exp(3 * beta) + 6 * std::exp(-beta)));
}

TEST_CASE("expected partition function: spin sum against graph enumeration") {
  for (std::uint64_t n = 1; n <= 6; ++n)
    for (double p : {0.1, 0.5, 0.9})
      for (double beta : {0.0, 0.3, 1.0})
        CHECK(expected_partition_function(n, p, beta) ==
              doctest::Approx(expected_partition_function_by_graphs(n, p, beta)).epsilon(1e-12));
}

TEST_CASE("expected partition function against the profile formula") {
  const std::uint64_t n = 20;
  const double p = 2.0 / n, beta = 0.5;
  const double plus = std::log1p(p * std::expm1(beta)), minus = std::log1p(p * std::expm1(-beta));
  double z = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double same = double(k * (k - 1) / 2 + (n - k) * (n - k - 1) / 2);
    z += std::exp(log_choose(double(n), double(k)) + same * plus + double(k * (n - k)) * minus);
  }
  CHECK(expected_partition_function(n, p, beta) == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("finite-n annealed free energy approaches the oracle") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (double beta : {0.25, 1.0}) {
      const double limit = ising_oracle(beta, c).value;
      auto gap = [&](std::uint64_t n) {
        return std::abs(std::log(expected_partition_function(n, c / double(n), beta)) / double(n) - limit);
      };
      CHECK(gap(20) < gap(10));
      CHECK(gap(10) < gap(5));
      CHECK(gap(20) < 0.2);
    }
  }
  CHECK(ising_oracle(0.0, 1.0).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // Tiny quenched sample: Z of one graph is at least the uniform-spin term.
  const double z = exact_tiny_partition_function(8, 0.3, 0.5, 3);
  CHECK(z >= 2.0);
  CHECK_THROWS_AS(exact_tiny_partition_function(15, 0.3, 0.5, 3), ResourceError);
}
