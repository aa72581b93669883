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
#include <map>
#include <numeric>
#include <set>

#include "ldg/errors.hpp"
#include "ldg/graphs.hpp"
#include "ldg/measures.hpp"
#include "ldg/rng.hpp"

using namespace ldg;

namespace {

ModelParams benchmark(std::uint64_t n) { return ModelParams(ColorMeasure({0.5, 0.5}), Kernel(2, {2, 1, 1, 3}), n); }

}  // namespace

TEST_CASE("edge probabilities are min(C/n, 1)") {
  const ModelParams params(ColorMeasure({0.5, 0.5}), Kernel(2, {2, 1, 1, 300}), 100);
  CHECK(params.p(0, 0) == doctest::Approx(0.02));
  CHECK(params.p(0, 1) == doctest::Approx(0.01));
  CHECK(params.p(1, 1) == 1.0);
  CHECK_THROWS_AS(ModelParams(ColorMeasure({1}), Kernel(1, {1}), 0), DomainError);
  CHECK_THROWS_AS(ModelParams(ColorMeasure({1}), Kernel(2, {1, 1, 1, 1}), 5), ShapeError);
}

TEST_CASE("triangle slots decode bijectively") {
  for (std::uint64_t k : {2u, 3u, 7u, 20u}) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (std::uint64_t s = 0; s < block_slots(k, k, true); ++s) {
      const auto [i, j] = decode_triangle_slot(s, k);
      CHECK(i < j);
      CHECK(j < k);
      seen.insert({i, j});
    }
    CHECK(seen.size() == k * (k - 1) / 2);
  }
  CHECK(block_slots(3, 4, false) == 12);
  CHECK(block_slots(0, 0, true) == 0);
  CHECK(block_slots(1, 1, true) == 0);
}

TEST_CASE("slot and edge streams draw identically") {
  const std::vector<std::uint64_t> sizes{30, 50};
  const auto probs = EdgeProbabilities::from_kernel(Kernel(2, {20, 5, 5, 40}), 80);
  std::vector<std::vector<Vertex>> by_color(2);
  for (Vertex v = 0; v < 30; ++v) by_color[0].push_back(v);
  for (Vertex v = 30; v < 80; ++v) by_color[1].push_back(v);
  Rng r1(9), r2(9);
  std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> slots;
  stream_block_slots(sizes, probs, r1, [&](std::size_t a, std::size_t b, std::uint64_t s) { slots.emplace_back(a, b, s); });
  std::size_t edges = 0;
  stream_block_edges(by_color, probs, r2, [&](std::size_t, std::size_t, Vertex, Vertex) { ++edges; });
  CHECK(edges == slots.size());
  CHECK(r1() == r2());
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto g1 = sample_colored_graph(benchmark(500), 42);
  const auto g2 = sample_colored_graph(benchmark(500), 42);
  const auto g3 = sample_colored_graph(benchmark(500), 43);
  CHECK(g1 == g2);
  CHECK_FALSE(g1 == g3);
  CHECK_NOTHROW(g1.validate());
}

TEST_CASE("edge list round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = sample_colored_graph(benchmark(40 + seed), seed);
    const auto text = to_edge_list(g);
    CHECK(parse_edge_list(text) == g);
    CHECK(to_edge_list(parse_edge_list(text)) == text);
  }
}

TEST_CASE("edge list parse errors carry line numbers") {
  auto message = [](const char* text) {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("3 1\n0 0 0\n0 x\n").find("line 3") != std::string::npos);
  CHECK(message("3\n0 0 0\n").find("line 1") != std::string::npos);
  CHECK(message("3 1\n0 0\n").find("line 2") != std::string::npos);
  CHECK(message("3 1\n0 0 0\n0 1\n1 0\n").find("duplicate") != std::string::npos);
  CHECK_THROWS_AS(parse_edge_list("3 1\n0 0 0\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_edge_list("3 1\n0 0 0\n0 5\n"), ParseError);
}

TEST_CASE("empirical structures are exactly consistent") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t m = 1 + seed % 3;
    std::vector<double> w(m, 1.0 / double(m));
    w[0] += 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> k(m * m, 2.0);
    for (std::size_t a = 0; a < m; ++a) k[a * m + a] = 3.0 + double(a);
    const auto g = sample_colored_graph(ModelParams(ColorMeasure(w), Kernel(m, k), 60 + seed), seed);
    const auto em = empirical_measures(g);
    const auto image = phi(em.neighborhoods);
    CHECK(image.colors == em.colors);
    CHECK(image.pairs == em.pairs);
    CHECK(em.pairs.total() == 2 * g.edge_count());
    CHECK(em.edge_count == g.edge_count());
    std::uint64_t deg_sum = 0;
    for (auto d : degrees(g)) deg_sum += d;
    CHECK(deg_sum == 2 * g.edge_count());
  }
}

TEST_CASE("mean edge count matches the model") {
  // E|E| = sum over blocks of slots * p, averaged over colour draws.
  const std::uint64_t n = 200;
  const double c = 3.0;
  const ModelParams params(ColorMeasure({1}), Kernel(1, {c}), n);
  const double expected = double(n * (n - 1) / 2) * c / double(n);
  const int reps = 400;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double e = double(sample_colored_graph(params, derive_seed(7, 0, r)).edge_count());
    sum += e;
    sumsq += e * e;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("conditional sampler hits its targets exactly") {
  const auto base = sample_colored_graph(benchmark(80), 3);
  const auto em = empirical_measures(base);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = sample_conditional(em.colors, em.pairs, seed);
    const auto out = empirical_measures(g);
    CHECK(out.colors == em.colors);
    CHECK(out.pairs == em.pairs);
  }
}

TEST_CASE("conditional sampler is uniform on a small instance") {
  // m = 1, n = 4, two edges: 15 equally likely graphs.
  ColorCounts omega{4, {4}};
  PairCounts varpi = PairCounts::zero(4, 1);
  varpi.at(0, 0) = 4;
  std::map<std::vector<Edge>, int> freq;
  const int seeds = 15000;
  for (int s = 0; s < seeds; ++s) ++freq[sample_conditional(omega, varpi, s).edges];
  CHECK(freq.size() == 15);
  const double p = 1.0 / 15.0;
  const double se = std::sqrt(p * (1 - p) / seeds);
  for (const auto& [edges, count] : freq) CHECK(std::abs(count / double(seeds) - p) < 4.0 * se);
}

TEST_CASE("conditional sampler rejects unrealisable targets") {
  ColorCounts omega{3, {3}};
  PairCounts varpi = PairCounts::zero(3, 1);
  varpi.at(0, 0) = 8;  // four edges among three vertices
  CHECK_THROWS_AS(sample_conditional(omega, varpi, 1), InfeasibleError);
  PairCounts other = PairCounts::zero(4, 1);
  CHECK_THROWS_AS(sample_conditional(omega, other, 1), ShapeError);
}
