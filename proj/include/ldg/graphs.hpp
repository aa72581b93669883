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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ldg/measures.hpp"
#include "ldg/rng.hpp"

namespace ldg {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Simple graph on vertices 0..n-1 with colours in 0..m-1. Edges are stored
// once as (u, v) with u < v, sorted.
struct ColoredGraph {
  std::size_t m = 1;
  std::vector<std::size_t> colors;
  std::vector<Edge> edges;

  std::size_t n() const noexcept { return colors.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
  void validate() const;
  friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;
};

// Colour law, kernel and size; p_n(a, b) = min(C(a, b) / n, 1).
struct ModelParams {
  ColorMeasure mu;
  Kernel kernel;
  std::uint64_t n = 1;

  ModelParams(ColorMeasure mu_, Kernel kernel_, std::uint64_t n_);
  double p(std::size_t a, std::size_t b) const;
  ModelParams with_size(std::uint64_t size) const { return ModelParams(mu, kernel, size); }
};

// Symmetric m x m matrix of connection probabilities.
struct EdgeProbabilities {
  std::size_t m = 1;
  std::vector<double> p;

  static EdgeProbabilities from_model(const ModelParams& params);
  static EdgeProbabilities from_kernel(const Kernel& kernel, std::uint64_t n);
  double operator()(std::size_t a, std::size_t b) const { return p[a * m + b]; }
};

// Blocks with p below this are sampled by geometric skipping over the slot
// index space, denser blocks by one Bernoulli draw per slot.
inline constexpr double kDenseBlockThreshold = 0.25;

// Vertex ids grouped by colour, ascending within each colour.
std::vector<std::vector<Vertex>> group_by_color(const std::vector<std::size_t>& colors, std::size_t m);

// Decodes slot s of the upper triangle {(i, j): 0 <= i < j < k}, row-major.
std::pair<std::uint64_t, std::uint64_t> decode_triangle_slot(std::uint64_t s, std::uint64_t k);

// Draws every slot of every colour-pair block with its block probability and
// calls on_slot(a, b, s) for each included slot s, blocks in order a <= b.
// Slots index the upper triangle of a colour class (a == b) or the
// |a| x |b| rectangle, row-major.
template <class OnSlot>
void stream_block_slots(const std::vector<std::uint64_t>& class_sizes, const EdgeProbabilities& probs,
                        Rng& rng, OnSlot&& on_slot) {
  const std::size_t m = probs.m;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double p = probs(a, b);
      if (p <= 0.0) continue;
      const std::uint64_t ka = class_sizes[a];
      const std::uint64_t kb = class_sizes[b];
      const std::uint64_t slots = a == b ? ka * (ka - (ka > 0 ? 1 : 0)) / 2 : ka * kb;
      if (slots == 0) continue;
      if (p >= kDenseBlockThreshold) {
        for (std::uint64_t s = 0; s < slots; ++s) {
          if (p >= 1.0 || rng.bernoulli(p)) on_slot(a, b, s);
        }
      } else {
        const double log_q = std::log1p(-p);
        std::uint64_t s = rng.geometric_skip(log_q);
        while (s < slots) {
          on_slot(a, b, s);
          const std::uint64_t skip = rng.geometric_skip(log_q);
          if (skip >= slots - s) break;
          s += skip + 1;
        }
      }
    }
  }
}

// As stream_block_slots, decoding each slot to visit(a, b, u, v).
template <class Visit>
void stream_block_edges(const std::vector<std::vector<Vertex>>& by_color,
                        const EdgeProbabilities& probs, Rng& rng, Visit&& visit) {
  std::vector<std::uint64_t> sizes(by_color.size());
  for (std::size_t a = 0; a < by_color.size(); ++a) sizes[a] = by_color[a].size();
  stream_block_slots(sizes, probs, rng, [&](std::size_t a, std::size_t b, std::uint64_t s) {
    if (a == b) {
      const auto [i, j] = decode_triangle_slot(s, sizes[a]);
      visit(a, b, by_color[a][i], by_color[a][j]);
    } else {
      visit(a, b, by_color[a][s / sizes[b]], by_color[b][s % sizes[b]]);
    }
  });
}

// Colours i.i.d. from mu into `colors` (resized to n).
void sample_colors(const ColorMeasure& mu, std::uint64_t n, Rng& rng, std::vector<std::size_t>& colors);

ColoredGraph sample_colored_graph(const ModelParams& params, std::uint64_t seed);

struct EmpiricalMeasures {
  ColorCounts colors;
  PairCounts pairs;
  NeighborhoodCounts neighborhoods;
  std::uint64_t edge_count = 0;
};

std::vector<std::uint64_t> degrees(const ColoredGraph& graph);

// (L1, L2, M) as exact integer counts over n.
EmpiricalMeasures empirical_measures(const ColoredGraph& graph);

// Number of simple-edge slots between colour classes of the given sizes.
std::uint64_t block_slots(std::uint64_t ka, std::uint64_t kb, bool same_color);

// Uniform colored graph with L1 = omega_n and L2 = varpi_n: colours by a
// seeded shuffle of the colour multiset, then exactly n(a, b) distinct edges
// per colour pair drawn without replacement (Floyd).
ColoredGraph sample_conditional(const ColorCounts& omega_n, const PairCounts& varpi_n,
                                std::uint64_t seed, int max_retries = 1);

// "n m\n<colours>\nu v\n..." text format.
std::string to_edge_list(const ColoredGraph& graph);
ColoredGraph parse_edge_list(std::string_view text);

}  // namespace ldg
