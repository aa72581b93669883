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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ldg/graphs.hpp"
#include "ldg/measures.hpp"

namespace ldg {

enum class EventKind {
  EdgesAtLeast,     // |E| >= ceil(threshold n)
  EdgesBelow,       // |E| < threshold n
  IsolatedAtLeast,  // D(0) >= threshold
  PairAtLeast,      // L2(a, b) >= threshold
};

struct TailEvent {
  EventKind kind = EventKind::EdgesAtLeast;
  double threshold = 0.0;
  std::size_t a = 0;  // PairAtLeast only
  std::size_t b = 0;

  std::string describe() const;
};

struct TailExperiment {
  ColorMeasure mu;
  Kernel kernel;
  TailEvent event;
  std::vector<std::uint64_t> sizes;
  std::uint64_t replicas = 1;
  std::vector<std::uint64_t> replicas_per_size{};  // optional, overrides `replicas`
  std::uint64_t first_replica = 0;               // replica index range start (for split runs)
  std::uint64_t seed = 0;
  // When set, graphs are drawn with this kernel and hits are reweighted by the
  // exact likelihood ratio (importance sampling). Unset means plain Monte Carlo.
  std::optional<Kernel> proposal{};
  unsigned threads = 1;

  void validate() const;
  std::uint64_t replicas_at(std::size_t index) const;
};

struct SizeEstimate {
  std::uint64_t n = 0;
  std::uint64_t replicas = 0;
  std::uint64_t hits = 0;
  double weight_sum = 0.0;     // sum of likelihood ratios over hits (= hits for plain MC)
  double weight_sq_sum = 0.0;  // sum of squared ratios over hits
  double p_hat = 0.0;
  double p_se = 0.0;
  double exponent = 0.0;       // -log(p_hat) / n; +inf when no hits
  double exponent_se = 0.0;    // delta method
  double exponent_lower_bound = 0.0;  // with zero hits: -log(3 / replicas) / n
  bool zero_hits = false;
  double rate_prediction = std::numeric_limits<double>::quiet_NaN();
  double ci_half_width() const { return 1.96 * exponent_se; }
};

struct ExponentFit {
  bool available = false;
  double rate = 0.0;       // slope of -log p_hat against n
  double intercept = 0.0;
  double rate_se = 0.0;
  std::vector<double> residuals;
  std::vector<std::uint64_t> sizes_used;
};

struct ExponentEstimate {
  std::vector<SizeEstimate> per_size;
  ExponentFit fit;
  bool importance_sampled = false;
  bool inconclusive = false;  // no hits at any size
};

ExponentEstimate estimate_tail_exponent(const TailExperiment& experiment);

// Combines two runs over disjoint replica ranges of the same experiment.
ExponentEstimate merge_estimates(const ExponentEstimate& x, const ExponentEstimate& y);

// Weighted least squares of -log p_hat = rate n + b over sizes with hits.
ExponentFit fit_exponent(const std::vector<SizeEstimate>& per_size);

// -(1/n) log P(|E| >= ceil(x n)) for G(n, c/n), exactly; below the mean
// edge count the lower tail P(|E| <= floor(x n)) is used instead.
double exact_er_edge_exponent(std::uint64_t n, double c, double x);

// Intercept a of the least-squares fit values ~ a + b / n.
struct InverseSizeFit {
  double limit = 0.0;
  double slope = 0.0;
};
InverseSizeFit fit_inverse_size(const std::vector<std::uint64_t>& sizes, const std::vector<double>& values);

std::string to_csv(const ExponentEstimate& estimate);

struct LlnSample {
  std::uint64_t seed = 0;
  double tv_degree = 0.0;        // D vs the Poisson mixture
  double tv_neighborhood = 0.0;  // M vs Q*, unrealised Q* mass counted as distance
  double tv_colors = 0.0;
  double max_color_deviation = 0.0;
  bool colors_within_envelope = false;  // |L1(a) - mu(a)| <= 3 sqrt(mu(a)(1 - mu(a)) / n)
  double max_pair_deviation = 0.0;      // max |L2 - C mu (x) mu|
  std::uint64_t max_degree = 0;
};

struct LlnReport {
  std::uint64_t n = 0;
  std::vector<LlnSample> samples;

  static double quantile(std::vector<double> values, double q);
  std::vector<double> column(double LlnSample::*field) const;
};

LlnReport lln_check(const ModelParams& params, const std::vector<std::uint64_t>& seeds);

// Seeds used by the law-of-large-numbers acceptance runs.
std::vector<std::uint64_t> published_seeds();

}  // namespace ldg
