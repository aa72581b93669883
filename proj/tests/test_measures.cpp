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
#include "ldg/graphs.hpp"
#include "ldg/measures.hpp"
#include "ldg/rates.hpp"
#include "ldg/rng.hpp"

using namespace ldg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Atom atom(std::size_t a, std::vector<std::uint64_t> ell) { return Atom{a, DegreeVector(std::move(ell))}; }

NeighborhoodMeasure point(std::size_t m, const Atom& at) {
  NeighborhoodMeasure nu(m);
  nu.add(at, 1.0);
  return nu;
}

}  // namespace

TEST_CASE("measure invariants are enforced at construction") {
  CHECK_THROWS_AS(Alphabet(0), DomainError);
  CHECK_THROWS_AS(ColorMeasure({0.5, -0.1}), DomainError);
  CHECK_THROWS_AS(PairMeasure(2, {0, 1, 0.5, 0}), DomainError);
  CHECK_THROWS_AS(PairMeasure(2, {0, 1, 1}), ShapeError);
  CHECK_THROWS_AS(Kernel(2, {0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(Kernel(2, {1, 2, 3, 1}), DomainError);
  CHECK_NOTHROW(Kernel(2, {1, 2, 2, 1}));
  CHECK(ColorMeasure({0.25, 0.75}).is_probability());
  CHECK_FALSE(ColorMeasure({0.25, 0.7}).is_probability());
}

TEST_CASE("asymmetric kernel diagnostic names the entries") {
  try {
    Kernel(3, {1, 2, 0, 1, 1, 5, 0, 4, 1});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(0,1)") != std::string::npos);
    CHECK(msg.find("(1,2)") != std::string::npos);
    CHECK(msg.find("(0,2)") == std::string::npos);
  }
}

TEST_CASE("relative entropy") {
  const ColorMeasure mu({0.3, 0.7});
  CHECK(relative_entropy(mu, mu) == doctest::Approx(0.0));
  CHECK(relative_entropy(ColorMeasure({0.5, 0.5}), ColorMeasure({0.25, 0.75})) ==
        doctest::Approx(0.5 * std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(relative_entropy(ColorMeasure({0.5, 0.5}), ColorMeasure({0.25, 0.75})) ==
        doctest::Approx(0.143841036225890).epsilon(1e-12));
  CHECK(relative_entropy(ColorMeasure({1, 0}), ColorMeasure({0, 1})) == kInf);
  CHECK_THROWS_AS(relative_entropy(ColorMeasure({1}), ColorMeasure({0.5, 0.5})), ShapeError);
}

TEST_CASE("total variation") {
  const auto nu = point(2, atom(0, {1, 0}));
  NeighborhoodMeasure half(2);
  half.add(atom(0, {1, 0}), 0.5);
  half.add(atom(1, {1, 0}), 0.5);
  CHECK(total_variation(nu, nu) == 0.0);
  CHECK(total_variation(nu, point(2, atom(1, {0, 0}))) == doctest::Approx(1.0));
  CHECK(total_variation(nu, half) == doctest::Approx(0.5));
  NeighborhoodMeasure sub(2);
  sub.add(atom(0, {0, 0}), 0.5);
  CHECK_THROWS_AS(total_variation(nu, sub), DomainError);
}

TEST_CASE("product kernel measure") {
  const auto one = product_kernel_measure(Kernel(1, {2}), ColorMeasure({1}));
  CHECK(one(0, 0) == 2.0);
  const auto two = product_kernel_measure(Kernel::constant(2, 3.0), ColorMeasure({0.5, 0.5}));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(two(a, b) == 0.75);
  CHECK(two.total_mass() == doctest::Approx(3.0));
  const auto zero = product_kernel_measure(Kernel(2, {1, 2, 2, 1}), ColorMeasure({0, 0}));
  CHECK(zero.total_mass() == 0.0);
  // Exact symmetry under awkward weights.
  const auto odd = product_kernel_measure(Kernel(3, {1.1, 0.3, 2.7, 0.3, 0.9, 1.3, 2.7, 1.3, 0.2}),
                                          ColorMeasure({0.1, 0.7, 0.2}));
  CHECK(odd.is_symmetric());
}

TEST_CASE("phi of point masses and of a two-vertex graph") {
  const auto p = phi(point(2, atom(1, {0, 0})));
  CHECK(p.colors[1] == 1.0);
  CHECK(p.pairs.total_mass() == 0.0);

  ColoredGraph g{1, {0, 0}, {{0, 1}}};
  const auto em = empirical_measures(g);
  const auto image = phi(em.neighborhoods);
  CHECK(image.colors == em.colors);
  CHECK(image.pairs == em.pairs);
  const auto pm = phi(em.neighborhoods.measure());
  CHECK(pm.colors[0] == 1.0);
  CHECK(pm.pairs(0, 0) == 1.0);
  CHECK(degree_distribution(em.neighborhoods.measure()).pmf == std::vector<double>{0.0, 1.0});
}

TEST_CASE("phi of the limit law reproduces (mu, C mu x mu)") {
  const ColorMeasure mu({0.4, 0.6});
  const Kernel k(2, {2, 1, 1, 3});
  const auto q = poisson_limit_law(mu, k);
  const auto image = phi(q);
  const auto target = product_kernel_measure(k, mu);
  for (std::size_t a = 0; a < 2; ++a) {
    CHECK(image.colors[a] == doctest::Approx(mu[a]).epsilon(1e-12));
    for (std::size_t b = 0; b < 2; ++b) CHECK(image.pairs(a, b) == doctest::Approx(target(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("degree distribution of the one-colour limit law is Poisson") {
  const double c = 2.5;
  const auto d = degree_distribution(poisson_limit_law(ColorMeasure({1}), Kernel(1, {c})));
  double f = std::exp(-c);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(d.pmf[k] == doctest::Approx(f).epsilon(1e-10));
    f *= c / double(k + 1);
  }
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("sub-consistency") {
  const auto nu = point(1, atom(0, {5}));
  CHECK_FALSE(is_sub_consistent(PairMeasure(1, {1.0}), nu));
  CHECK(is_sub_consistent(PairMeasure(1, {6.0}), nu));
  CHECK(is_consistent(PairMeasure(1, {5.0}), nu));
  ColoredGraph g{2, {0, 1, 1, 0}, {{0, 1}, {1, 2}, {2, 3}}};
  const auto em = empirical_measures(g);
  CHECK(is_sub_consistent(em.pairs.measure(), em.neighborhoods.measure(), 0.0));
  CHECK(is_consistent(em.pairs.measure(), em.neighborhoods.measure(), 0.0));
}

TEST_CASE("consistify") {
  SUBCASE("consistent input is returned unchanged") {
    const auto nu = point(1, atom(0, {2}));
    const PairMeasure varpi(1, {2.0});
    const auto out = consistify(varpi, nu, 0.01);
    CHECK(out.pairs == varpi);
    CHECK(total_variation(out.nu, nu) == 0.0);
    CHECK(out.shift_scale == 0);
  }
  SUBCASE("deficit is carried by atoms n e^(b)") {
    const double delta = 0.3;
    const auto nu = point(1, atom(0, {0}));
    const auto out = consistify(PairMeasure(1, {delta}), nu, 0.01);
    const std::uint64_t n = out.shift_scale;
    REQUIRE(n > 0);
    CHECK(out.nu.mass(atom(0, {n})) == doctest::Approx(delta / double(n)).epsilon(1e-12));
    CHECK(phi(out.nu).pairs(0, 0) == doctest::Approx(delta).epsilon(1e-12));
    CHECK(is_consistent(out.pairs, out.nu));
    CHECK(total_variation(out.nu, nu) <= 0.01);
  }
  SUBCASE("not sub-consistent") {
    CHECK_THROWS_AS(consistify(PairMeasure(1, {1.0}), point(1, atom(0, {5})), 0.01), DomainError);
  }
}

TEST_CASE("approximation pipeline preserves phi exactly") {
  const ColorMeasure mu({0.5, 0.5});
  const Kernel k(2, {2, 1, 1, 1.5});
  const auto q = poisson_limit_law(mu, k, 1e-10);
  const auto varpi = product_kernel_measure(k, mu);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto rep = approximate(varpi, q, 4000, 0.05, seed);
    const auto pq = phi(rep.quantized);
    CHECK(pq.colors == rep.omega_n);
    CHECK(pq.pairs == rep.varpi_n);
    const auto pc = phi(rep.capped);
    CHECK(pc.colors == rep.omega_n);
    CHECK(pc.pairs == rep.varpi_n);
    const std::uint64_t cap = degree_cap(4000);
    for (const auto& [at, count] : rep.capped.atoms) CHECK(at.ell.magnitude() <= cap);
    CHECK(rep.tv_quantized <= 0.05);
  }
}

TEST_CASE("degree cap is the integer cube root") {
  CHECK(degree_cap(1) == 1);
  CHECK(degree_cap(7) == 1);
  CHECK(degree_cap(8) == 2);
  CHECK(degree_cap(999) == 9);
  CHECK(degree_cap(1000) == 10);
  CHECK(degree_cap(20000) == 27);
}

TEST_CASE("count rounding") {
  const auto c = round_color_counts(ColorMeasure({1.0 / 3, 1.0 / 3, 1.0 / 3}), 10);
  CHECK(c.counts[0] + c.counts[1] + c.counts[2] == 10);
  const auto p = round_pair_counts_up(PairMeasure(2, {0.31, 0.2, 0.2, 0.1}), 10);
  CHECK(p(0, 1) == p(1, 0));
  CHECK(p(0, 0) % 2 == 0);
  CHECK(p(1, 1) % 2 == 0);
  CHECK(p(0, 0) >= 4);
  CHECK_NOTHROW(p.validate());
}
