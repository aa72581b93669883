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

#include "ldg/errors.hpp"
#include "ldg/mcharness.hpp"
#include "ldg/oracles.hpp"
#include "ldg/rates.hpp"

using namespace ldg;

namespace {

TailExperiment er_edges(double c, double x, std::vector<std::uint64_t> sizes, std::uint64_t replicas) {
  TailExperiment e{.mu = ColorMeasure({1}), .kernel = Kernel(1, {c})};
  e.event = TailEvent{EventKind::EdgesAtLeast, x};
  e.sizes = std::move(sizes);
  e.replicas = replicas;
  e.seed = 17;
  return e;
}

double exact_tail(std::uint64_t n, double c, std::uint64_t k) {
  return std::exp(binomial_log_tail(n * (n - 1) / 2, c / double(n), k));
}

}  // namespace

TEST_CASE("exact edge exponent is the binomial tail") {
  CHECK(exact_er_edge_exponent(100, 2.0, 1.5) == doctest::Approx(-std::log(exact_tail(100, 2.0, 150)) / 100).epsilon(1e-12));
  // Frozen values; the 1/n extrapolation lands within 1% of the limit.
  CHECK(exact_er_edge_exponent(250, 2.0, 1.5) == doctest::Approx(0.122475).epsilon(1e-5));
  CHECK(exact_er_edge_exponent(2000, 2.0, 1.5) == doctest::Approx(0.110487).epsilon(1e-5));
  const std::vector<std::uint64_t> sizes{250, 500, 1000, 2000};
  std::vector<double> values;
  for (auto n : sizes) values.push_back(exact_er_edge_exponent(n, 2.0, 1.5));
  const auto fit = fit_inverse_size(sizes, values);
  CHECK(std::abs(fit.limit - rate_zeta_er(1.5, 2.0)) / rate_zeta_er(1.5, 2.0) < 0.02);
}

TEST_CASE("exact edge exponent below the mean uses the lower tail") {
  const std::uint64_t n = 200, N = n * (n - 1) / 2;
  const double p = 2.0 / n;
  double total = 0.0;
  for (std::uint64_t k = 0; k <= 100; ++k)
    total += std::exp(std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) + k * std::log(p) +
                      (N - k) * std::log1p(-p));
  CHECK(exact_er_edge_exponent(n, 2.0, 0.5) == doctest::Approx(-std::log(total) / n).epsilon(1e-10));
  CHECK(exact_er_edge_exponent(n, 2.0, 0.5) == doctest::Approx(rate_zeta_er(0.5, 2.0)).epsilon(0.05));
}

TEST_CASE("inverse-size fit recovers an exact line") {
  const std::vector<std::uint64_t> sizes{10, 20, 40, 80};
  std::vector<double> values;
  for (auto n : sizes) values.push_back(0.3 + 2.0 / double(n));
  const auto fit = fit_inverse_size(sizes, values);
  CHECK(fit.limit == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("exponent fit recovers an exact line") {
  std::vector<SizeEstimate> per;
  for (std::uint64_t n : {100u, 200u, 400u}) {
    SizeEstimate s;
    s.n = n;
    s.hits = 100;
    s.p_hat = std::exp(-(0.1 * double(n) + 1.5));
    s.p_se = 0.1 * s.p_hat;
    per.push_back(s);
  }
  const auto fit = fit_exponent(per);
  REQUIRE(fit.available);
  CHECK(fit.rate == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(1.5).epsilon(1e-8));
  per[1].hits = 0;
  per[2].hits = 0;
  CHECK_FALSE(fit_exponent(per).available);
}

TEST_CASE("estimates are deterministic and thread-count invariant") {
  auto e = er_edges(2.0, 1.1, {60, 120}, 20000);
  const auto a = estimate_tail_exponent(e);
  const auto b = estimate_tail_exponent(e);
  e.threads = 3;
  const auto c = estimate_tail_exponent(e);
  for (std::size_t i = 0; i < a.per_size.size(); ++i) {
    CHECK(a.per_size[i].hits == b.per_size[i].hits);
    CHECK(a.per_size[i].hits == c.per_size[i].hits);
    CHECK(a.per_size[i].p_hat == c.per_size[i].p_hat);
  }
  CHECK(to_csv(a) == to_csv(c));
}

TEST_CASE("split runs merge to the single run") {
  auto whole = er_edges(2.0, 1.1, {80}, 10000);
  auto first = whole;
  first.replicas = 6000;
  auto second = whole;
  second.replicas = 4000;
  second.first_replica = 6000;
  const auto merged = merge_estimates(estimate_tail_exponent(first), estimate_tail_exponent(second));
  const auto single = estimate_tail_exponent(whole);
  CHECK(merged.per_size[0].hits == single.per_size[0].hits);
  CHECK(merged.per_size[0].replicas == single.per_size[0].replicas);
  CHECK(merged.per_size[0].p_hat == doctest::Approx(single.per_size[0].p_hat).epsilon(1e-14));
}

TEST_CASE("plain Monte Carlo matches the binomial tail, including threshold rounding") {
  // 1.1 * 100 is 110.00000000000001 in floating point; the event is |E| >= 110.
  const auto est = estimate_tail_exponent(er_edges(2.2, 1.1, {100}, 40000));
  const auto& s = est.per_size[0];
  const double exact = exact_tail(100, 2.2, 110);
  CHECK(std::abs(s.p_hat - exact) < 4 * s.p_se);
  CHECK(std::abs(s.p_hat - exact_tail(100, 2.2, 111)) > 4 * s.p_se);
}

TEST_CASE("zero hits give a rule-of-three lower bound") {
  const auto est = estimate_tail_exponent(er_edges(1.0, 3.0, {200}, 1000));
  const auto& s = est.per_size[0];
  CHECK(s.zero_hits);
  CHECK(std::isinf(s.exponent));
  CHECK(s.exponent_lower_bound == doctest::Approx(-std::log(3.0 / 1000) / 200));
  CHECK(est.inconclusive);
  CHECK_FALSE(est.fit.available);
}

TEST_CASE("importance sampling is unbiased") {
  auto e = er_edges(2.0, 1.5, {100, 200}, 20000);
  e.proposal = Kernel(1, {3.0});
  const auto est = estimate_tail_exponent(e);
  CHECK(est.importance_sampled);
  for (const auto& s : est.per_size) {
    const double exact = exact_tail(s.n, 2.0, static_cast<std::uint64_t>(1.5 * double(s.n)));
    CHECK(s.hits > 1000);
    CHECK(std::abs(s.p_hat - exact) < 4 * s.p_se);
  }
}

TEST_CASE("experiment validation") {
  auto e = er_edges(2.0, 1.5, {}, 10);
  CHECK_THROWS_AS(e.validate(), DomainError);
  e = er_edges(2.0, 1.5, {10, 20}, 10);
  e.replicas_per_size = {5};
  CHECK_THROWS_AS(e.validate(), ShapeError);
  e = er_edges(2.0, 1.5, {10}, 0);
  CHECK_THROWS(e.validate());
}

TEST_CASE("published seeds") {
  const auto seeds = published_seeds();
  REQUIRE(seeds.size() == 20);
  CHECK(seeds.front() == 20260101);
  CHECK(seeds[1] == 20260101 + 7919);
}

TEST_CASE("law of large numbers at moderate size") {
  const ModelParams params(ColorMeasure({1}), Kernel(1, {3.0}), 5000);
  const auto rep = lln_check(params, {1, 2, 3, 4, 5});
  for (const auto& s : rep.samples) {
    CHECK(s.tv_degree < 0.05);
    CHECK(s.tv_neighborhood < 0.08);
  }
  CHECK(LlnReport::quantile({3, 1, 2}, 0.5) == 2.0);
}
