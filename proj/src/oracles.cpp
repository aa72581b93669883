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

#include "ldg/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "ldg/errors.hpp"
#include "ldg/rng.hpp"

namespace ldg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stirling-series remainder log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)].
double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0, s3 = 1.0 / 1680.0,
                   s4 = 1.0 / 1188.0;
  if (n < 16.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// x log(x / np) + np - x without cancellation near x = np.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v * v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

// log P(X = x) for X ~ Binomial(n, p), 0 < p < 1.
double log_binomial_pmf(double x, double n, double p) {
  const double q = 1.0 - p;
  if (x == 0.0) return n * std::log1p(-p);
  if (x == n) return n * std::log(p);
  const double lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

// log sum of pmf terms starting at `from` and moving by `dir` (+1 or -1)
// while terms stay within 50 nats of the first (largest) one.
double log_sum_monotone(std::uint64_t from, int dir, std::uint64_t n, double p) {
  const double nd = static_cast<double>(n);
  const double first = log_binomial_pmf(static_cast<double>(from), nd, p);
  double acc = 0.0;  // sum of exp(term - first)
  std::uint64_t j = from;
  while (true) {
    const double t = log_binomial_pmf(static_cast<double>(j), nd, p);
    if (t < first - 50.0) break;
    acc += std::exp(t - first);
    if (dir > 0) {
      if (j == n) break;
      ++j;
    } else {
      if (j == 0) break;
      --j;
    }
  }
  return first + std::log(acc);
}

}  // namespace

double binomial_log_tail(std::uint64_t N, double p, std::uint64_t k) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial tail: p outside [0, 1]");
  if (k > N + 1) throw DomainError("binomial tail: k exceeds N + 1");
  if (k == 0) return 0.0;
  if (k == N + 1) return -kInf;
  if (p == 0.0) return -kInf;
  if (p == 1.0) return 0.0;
  const auto mode = static_cast<std::uint64_t>(std::floor((static_cast<double>(N) + 1.0) * p));
  if (k > mode) return log_sum_monotone(k, +1, N, p);
  // Complement of the lower tail, which is summed downward from k - 1.
  const double lower = log_sum_monotone(k - 1, -1, N, p);
  return std::log1p(-std::exp(lower));
}

BigCount composition_count(std::uint64_t j, std::uint64_t parts) {
  if (parts == 0) throw DomainError("composition count: parts must be >= 1");
  // ways[s] = solutions with the parts placed so far summing to s.
  std::vector<BigCount> ways(j + 1, 0);
  ways[0] = 1;
  for (std::uint64_t p = 1; p < parts; ++p) {
    for (std::uint64_t s = 1; s <= j; ++s) ways[s] += ways[s - 1];
  }
  BigCount total = 0;
  for (std::uint64_t s = 0; s <= j; ++s) total += ways[s];
  return total;
}

bool composition_sandwich_holds(std::uint64_t j, std::uint64_t parts, const BigCount& count) {
  if (parts == 0) return false;
  BigCount factorial = 1;
  for (std::uint64_t i = 2; i < parts; ++i) factorial *= i;
  const BigCount scaled = count * factorial;
  const BigCount lower = boost::multiprecision::pow(BigCount(j), static_cast<unsigned>(parts - 1));
  const BigCount upper = boost::multiprecision::pow(BigCount(j + parts), static_cast<unsigned>(parts - 1));
  return lower <= scaled && scaled <= upper;
}

namespace {

// Counts vector partitions by depth-first descent through a candidate list
// sorted in decreasing (magnitude, lexicographic) order: each part is no
// larger than the one before it, so every multiset is produced once.
class VectorPartitionCounter {
 public:
  explicit VectorPartitionCounter(const DegreeVector& bound) : m_(bound.m()) {
    DegreeVector v = DegreeVector::zero(m_);
    enumerate(bound, v, 0);
    std::sort(candidates_.begin(), candidates_.end(), [](const DegreeVector& x, const DegreeVector& y) {
      if (x.magnitude() != y.magnitude()) return x.magnitude() > y.magnitude();
      return x.counts > y.counts;
    });
  }

  BigCount count(const DegreeVector& ell) { return rec(ell, 0); }

 private:
  void enumerate(const DegreeVector& bound, DegreeVector& v, std::size_t b) {
    if (b == m_) {
      if (v.magnitude() > 0) candidates_.push_back(v);
      return;
    }
    for (std::uint64_t k = 0; k <= bound[b]; ++k) {
      v.counts[b] = k;
      enumerate(bound, v, b + 1);
    }
    v.counts[b] = 0;
  }

  BigCount rec(const DegreeVector& rem, std::size_t start) {
    if (rem.magnitude() == 0) return 1;
    auto key = std::make_pair(rem.counts, start);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BigCount total = 0;
    const std::uint64_t mag = rem.magnitude();
    for (std::size_t i = start; i < candidates_.size(); ++i) {
      const DegreeVector& v = candidates_[i];
      if (v.magnitude() > mag) continue;
      bool fits = true;
      for (std::size_t b = 0; b < m_; ++b) fits = fits && v[b] <= rem[b];
      if (!fits) continue;
      DegreeVector next = rem;
      for (std::size_t b = 0; b < m_; ++b) next.counts[b] -= v[b];
      total += rec(next, i);
    }
    memo_.emplace(std::move(key), total);
    return total;
  }

  std::size_t m_;
  std::vector<DegreeVector> candidates_;
  std::map<std::pair<std::vector<std::uint64_t>, std::size_t>, BigCount> memo_;
};

void for_each_with_magnitude(std::size_t m, std::uint64_t s, DegreeVector& v, std::size_t b,
                             const std::function<void(const DegreeVector&)>& visit) {
  if (b + 1 == m) {
    v.counts[b] = s;
    visit(v);
    return;
  }
  for (std::uint64_t k = 0; k <= s; ++k) {
    v.counts[b] = k;
    for_each_with_magnitude(m, s - k, v, b + 1, visit);
  }
}

}  // namespace

BigCount vector_partition_count(const DegreeVector& ell) {
  if (ell.m() == 0) throw ShapeError("vector partition count: empty alphabet");
  if (ell.magnitude() > kPartitionBudget) throw ResourceError("vector partition count: |ell| exceeds budget 14");
  VectorPartitionCounter counter(ell);
  return counter.count(ell);
}

std::vector<BigCount> scalar_partition_counts(std::uint64_t s_max) {
  std::vector<BigCount> p(s_max + 1, 0);
  p[0] = 1;
  for (std::uint64_t n = 1; n <= s_max; ++n) {
    BigCount acc = 0;
    for (std::uint64_t k = 1;; ++k) {
      const std::uint64_t g1 = k * (3 * k - 1) / 2;
      if (g1 > n) break;
      const std::uint64_t g2 = k * (3 * k + 1) / 2;
      BigCount term = p[n - g1];
      if (g2 <= n) term += p[n - g2];
      if (k % 2 == 1) acc += term;
      else acc -= term;
    }
    p[n] = acc;
  }
  return p;
}

PartitionBoundReport partition_bound_check(std::size_t m, const std::vector<std::uint64_t>& magnitudes) {
  if (m == 0) throw ShapeError("partition bound: m must be >= 1");
  PartitionBoundReport report;
  report.m = m;
  report.holds = true;
  const double md = static_cast<double>(m);
  for (std::uint64_t s : magnitudes) {
    if (s > kPartitionBudget) throw ResourceError("partition bound: magnitude exceeds budget 14");
    PartitionBoundEntry entry;
    entry.magnitude = s;
    entry.max_count = 0;
    DegreeVector v = DegreeVector::zero(m);
    for_each_with_magnitude(m, s, v, 0, [&](const DegreeVector& ell) {
      BigCount c = vector_partition_count(ell);
      if (c > entry.max_count) {
        entry.max_count = c;
        entry.argmax = ell;
      }
    });
    if (s >= 2) {
      const double sd = static_cast<double>(s);
      const double lc = std::log(entry.max_count.convert_to<double>());
      entry.theta_hat = lc / (std::log(sd) * std::pow(sd, (2.0 * md - 1.0) / (2.0 * md)));
    }
    entry.holds = entry.theta_hat <= kThetaPerColor * md;
    report.holds = report.holds && entry.holds;
    report.vector_entries.push_back(std::move(entry));
  }
  const auto p = scalar_partition_counts(60);
  for (std::uint64_t s = 0; s <= 60; ++s) {
    ScalarBoundEntry e;
    e.magnitude = s;
    e.count = p[s];
    e.log_count = std::log(p[s].convert_to<double>());
    e.log_bound = kScalarPartitionConstant * std::sqrt(static_cast<double>(s));
    e.holds = e.log_count <= e.log_bound;
    report.holds = report.holds && e.holds;
    report.scalar_entries.push_back(std::move(e));
  }
  return report;
}

SupportBoundReport support_bound_check(const NeighborhoodCounts& nu_n) {
  nu_n.validate();
  const double m = static_cast<double>(nu_n.m);
  const PhiCounts image = phi(nu_n);
  const double mass = static_cast<double>(image.pairs.total());  // n |varpi_n|
  SupportBoundReport r;
  r.support = nu_n.atoms.size();
  const double gm = std::tgamma(m);
  r.constant_c = std::pow(2.0, m) * std::pow(std::tgamma(m + 2.0), m / (m + 1.0)) / gm;
  r.constant_d = std::pow(2.0, m) * std::pow(m + 1.0, m) / gm;
  r.bound = r.constant_c * std::pow(mass, m / (m + 1.0)) + r.constant_d;
  r.holds = static_cast<double>(r.support) <= r.bound;
  return r;
}

IsingOracleResult ising_oracle(double beta, double c) {
  if (!(c > 0.0)) throw DomainError("ising oracle: c must be positive");
  if (!(beta >= 0.0)) throw DomainError("ising oracle: beta must be nonnegative");
  const double up = std::expm1(beta);
  const double down = std::expm1(-beta);
  auto f = [&](double a) {
    const double b = 1.0 - a;
    const double ent = (a > 0.0 ? -a * std::log(a) : 0.0) + (b > 0.0 ? -b * std::log(b) : 0.0);
    return ent + 0.5 * c * ((a * a + b * b) * up + 2.0 * a * b * down);
  };
  // The objective is symmetric under a <-> 1 - a; search [0, 1/2].
  constexpr int kScan = 2000;
  IsingOracleResult best{0.0, f(0.0)};
  for (int i = 1; i <= kScan; ++i) {
    const double a = 0.5 * i / kScan;
    const double v = f(a);
    if (v > best.value) best = {a, v};
  }
  double lo = std::max(0.0, best.alpha - 0.5 / kScan);
  double hi = std::min(0.5, best.alpha + 0.5 / kScan);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  for (double a : {x1, x2, lo, hi}) {
    const double v = f(a);
    if (v > best.value) best = {a, v};
  }
  return best;
}

double ising_partition_function(const ColoredGraph& graph, double beta) {
  const std::size_t n = graph.n();
  if (n > kSpinBudget) throw ResourceError("ising partition function: more than 20 vertices");
  double z = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    long long energy = 0;
    for (const auto& [u, v] : graph.edges) energy += ((s >> u & 1) == (s >> v & 1)) ? 1 : -1;
    z += std::exp(beta * static_cast<double>(energy));
  }
  return z;
}

double exact_tiny_partition_function(std::uint64_t n, double p, double beta, std::uint64_t seed) {
  if (n > 14) throw ResourceError("tiny partition function: n exceeds 14");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("tiny partition function: p outside [0, 1]");
  Rng rng(seed);
  ColoredGraph g;
  g.m = 1;
  g.colors.assign(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) g.edges.emplace_back(u, v);
  return ising_partition_function(g, beta);
}

double expected_partition_function(std::uint64_t n, double p, double beta) {
  if (n > kSpinBudget) throw ResourceError("expected partition function: n exceeds 20");
  // Each pair contributes E exp(beta s_u s_v 1{uv in E}) independently.
  const double agree = 1.0 - p + p * std::exp(beta);
  const double differ = 1.0 - p + p * std::exp(-beta);
  double total = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    double prod = 1.0;
    for (std::uint64_t u = 0; u < n; ++u)
      for (std::uint64_t v = u + 1; v < n; ++v) prod *= ((s >> u & 1) == (s >> v & 1)) ? agree : differ;
    total += prod;
  }
  return total;
}

double expected_partition_function_by_graphs(std::uint64_t n, double p, double beta) {
  if (n > 6) throw ResourceError("graph enumeration: n exceeds 6");
  std::vector<Edge> slots;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  const std::size_t k = slots.size();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    ColoredGraph g;
    g.colors.assign(n, 0);
    double weight = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        g.edges.push_back(slots[i]);
        weight *= p;
      } else {
        weight *= 1.0 - p;
      }
    }
    if (weight > 0.0) total += weight * ising_partition_function(g, beta);
  }
  return total;
}

}  // namespace ldg
