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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "ldg/graphs.hpp"
#include "ldg/measures.hpp"

namespace ldg {

using BigCount = boost::multiprecision::cpp_int;

// log P(X >= k) for X ~ Binomial(N, p); 0 for k = 0 and -inf for k = N + 1.
double binomial_log_tail(std::uint64_t N, double p, std::uint64_t k);

// Nonnegative integer solutions of l_1 + ... + l_parts = j.
BigCount composition_count(std::uint64_t j, std::uint64_t parts);
// j^(parts-1) <= count (parts-1)! <= (j + parts)^(parts-1), exactly.
bool composition_sandwich_holds(std::uint64_t j, std::uint64_t parts, const BigCount& count);

inline constexpr std::uint64_t kPartitionBudget = 14;

// Multisets of nonzero degree vectors summing to ell; |ell| <= 14.
BigCount vector_partition_count(const DegreeVector& ell);

// p(0), ..., p(s_max) by Euler's pentagonal recurrence.
std::vector<BigCount> scalar_partition_counts(std::uint64_t s_max);

struct PartitionBoundEntry {
  std::uint64_t magnitude = 0;
  BigCount max_count;
  DegreeVector argmax;
  double theta_hat = 0.0;  // log(count) / (log S * S^((2m-1)/(2m))); 0 at S = 1
  bool holds = false;      // theta_hat <= 3m
};

struct ScalarBoundEntry {
  std::uint64_t magnitude = 0;
  BigCount count;
  double log_count = 0.0;
  double log_bound = 0.0;  // 2.57 sqrt(S)
  bool holds = false;
};

struct PartitionBoundReport {
  std::size_t m = 0;
  std::vector<PartitionBoundEntry> vector_entries;
  std::vector<ScalarBoundEntry> scalar_entries;  // S = 0..60
  bool holds = false;
};

inline constexpr double kThetaPerColor = 3.0;
inline constexpr double kScalarPartitionConstant = 2.57;

PartitionBoundReport partition_bound_check(std::size_t m, const std::vector<std::uint64_t>& magnitudes);

struct SupportBoundReport {
  std::size_t support = 0;
  double bound = 0.0;
  double constant_c = 0.0;
  double constant_d = 0.0;
  bool holds = false;
};

// #supp(nu_n) <= C (n |varpi_n|)^(m/(m+1)) + D.
SupportBoundReport support_bound_check(const NeighborhoodCounts& nu_n);

struct IsingOracleResult {
  double alpha = 0.5;
  double value = 0.0;
};

// max over alpha of the spin-count expression for lim (1/n) log E Z(beta).
IsingOracleResult ising_oracle(double beta, double c);

inline constexpr std::uint64_t kSpinBudget = 20;

// Z(beta) = sum over spins of exp(beta sum_{uv in E} s_u s_v); n <= 20.
double ising_partition_function(const ColoredGraph& graph, double beta);

// Z(beta) for one G(n, p) sample drawn from `seed`; n <= 14.
double exact_tiny_partition_function(std::uint64_t n, double p, double beta, std::uint64_t seed);

// E Z(beta) over G(n, p) as a sum over spin profiles; n <= 20.
double expected_partition_function(std::uint64_t n, double p, double beta);

// E Z(beta) by weighting every labelled graph on n <= 6 vertices.
double expected_partition_function_by_graphs(std::uint64_t n, double p, double beta);

}  // namespace ldg
