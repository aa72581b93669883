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

#include "ldg/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "ldg/errors.hpp"
#include "ldg/oracles.hpp"
#include "ldg/rates.hpp"
#include "ldg/rng.hpp"

namespace ldg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kBlock = 4096;  // replicas per reduction block

// Smallest integer count k with k >= t n; products within rounding of an
// integer (1.1 * 100 = 110.00000000000001) count as that integer.
std::uint64_t count_threshold(double t, std::uint64_t n) {
  const double tn = t * static_cast<double>(n);
  const double k = std::ceil(tn - 1e-9 * std::max(1.0, std::abs(tn)));
  return k <= 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

struct BlockSums {
  std::uint64_t hits = 0;
  double weight = 0.0;
  double weight_sq = 0.0;
};

class ReplicaRunner {
 public:
  ReplicaRunner(const TailExperiment& e, std::uint64_t n)
      : e_(e), n_(n), m_(e.mu.m()),
        target_(EdgeProbabilities::from_kernel(e.kernel, n)),
        draw_(EdgeProbabilities::from_kernel(e.proposal ? *e.proposal : e.kernel, n)),
        block_edges_(m_ * m_, 0), class_sizes_(m_, 0) {
    need_degrees_ = e.event.kind == EventKind::IsolatedAtLeast;
    if (e.proposal) {
      log_edge_.assign(m_ * m_, 0.0);
      log_gap_.assign(m_ * m_, 0.0);
      for (std::size_t i = 0; i < m_ * m_; ++i) {
        const double p = target_.p[i], q = draw_.p[i];
        if (p == q) continue;
        log_edge_[i] = p == 0.0 ? -kInf : std::log(p / q);
        log_gap_[i] = std::log1p(-p) - std::log1p(-q);
      }
    }
    if (m_ == 1) {
      by_color_.assign(1, std::vector<Vertex>(n));
      for (std::uint64_t v = 0; v < n; ++v) by_color_[0][v] = static_cast<Vertex>(v);
    }
  }

  // Returns (hit, log likelihood ratio).
  std::pair<bool, double> run(std::uint64_t seed) {
    Rng rng(seed);
    if (m_ > 1) {
      sample_colors(e_.mu, n_, rng, colors_);
      by_color_.assign(m_, {});
      for (std::uint64_t v = 0; v < n_; ++v) by_color_[colors_[v]].push_back(static_cast<Vertex>(v));
    }
    for (std::size_t a = 0; a < m_; ++a) class_sizes_[a] = by_color_[a].size();
    std::fill(block_edges_.begin(), block_edges_.end(), 0);
    std::uint64_t edges = 0;
    if (need_degrees_) {
      degree_.assign(n_, 0);
      stream_block_edges(by_color_, draw_, rng, [&](std::size_t a, std::size_t b, Vertex u, Vertex v) {
        ++edges;
        ++block_edges_[a * m_ + b];
        ++degree_[u];
        ++degree_[v];
      });
    } else {
      // Same draws as above; the event only needs per-block counts.
      stream_block_slots(class_sizes_, draw_, rng, [&](std::size_t a, std::size_t b, std::uint64_t) {
        ++edges;
        ++block_edges_[a * m_ + b];
      });
    }
    const bool hit = evaluate(edges);
    double log_w = 0.0;
    if (hit && e_.proposal) {
      for (std::size_t a = 0; a < m_; ++a) {
        for (std::size_t b = a; b < m_; ++b) {
          const std::size_t i = a * m_ + b;
          const std::uint64_t k = block_edges_[i];
          const std::uint64_t slots = block_slots(by_color_[a].size(), by_color_[b].size(), a == b);
          if (k > 0) log_w += static_cast<double>(k) * log_edge_[i];
          log_w += static_cast<double>(slots - k) * log_gap_[i];
        }
      }
    }
    return {hit, log_w};
  }

 private:
  bool evaluate(std::uint64_t edges) const {
    const TailEvent& ev = e_.event;
    switch (ev.kind) {
      case EventKind::EdgesAtLeast:
        return edges >= count_threshold(ev.threshold, n_);
      case EventKind::EdgesBelow:
        return static_cast<double>(edges) < ev.threshold * static_cast<double>(n_);
      case EventKind::IsolatedAtLeast: {
        std::uint64_t isolated = 0;
        for (auto d : degree_) isolated += d == 0;
        return isolated >= count_threshold(ev.threshold, n_);
      }
      case EventKind::PairAtLeast: {
        const std::size_t lo = std::min(ev.a, ev.b), hi = std::max(ev.a, ev.b);
        const std::uint64_t k = block_edges_[lo * m_ + hi] * (lo == hi ? 2 : 1);  // n L2(a, b)
        return k >= count_threshold(ev.threshold, n_);
      }
    }
    return false;
  }

  const TailExperiment& e_;
  std::uint64_t n_;
  std::size_t m_;
  EdgeProbabilities target_;
  EdgeProbabilities draw_;
  std::vector<double> log_edge_, log_gap_;
  bool need_degrees_ = false;
  std::vector<std::size_t> colors_;
  std::vector<std::vector<Vertex>> by_color_;
  std::vector<std::uint64_t> degree_;
  std::vector<std::uint64_t> block_edges_;
  std::vector<std::uint64_t> class_sizes_;
};

void finish(SizeEstimate& s, bool weighted) {
  const double r = static_cast<double>(s.replicas);
  const double nd = static_cast<double>(s.n);
  s.zero_hits = s.hits == 0;
  s.p_hat = s.weight_sum / r;
  if (weighted) {
    s.p_se = std::sqrt(std::max(0.0, s.weight_sq_sum / r - s.p_hat * s.p_hat) / r);
  } else {
    s.p_se = std::sqrt(std::max(0.0, s.p_hat * (1.0 - s.p_hat)) / r);
  }
  s.exponent_lower_bound = -std::log(std::min(1.0, 3.0 / r)) / nd;
  if (s.zero_hits || s.p_hat <= 0.0) {
    s.exponent = kInf;
    s.exponent_se = kInf;
  } else {
    s.exponent = -std::log(s.p_hat) / nd;
    s.exponent_se = s.p_se / (s.p_hat * nd);
  }
}

}  // namespace

std::string TailEvent::describe() const {
  std::ostringstream os;
  switch (kind) {
    case EventKind::EdgesAtLeast: os << "|E| >= " << threshold << " n"; break;
    case EventKind::EdgesBelow: os << "|E| < " << threshold << " n"; break;
    case EventKind::IsolatedAtLeast: os << "D(0) >= " << threshold; break;
    case EventKind::PairAtLeast: os << "L2(" << a << "," << b << ") >= " << threshold; break;
  }
  return os.str();
}

void TailExperiment::validate() const {
  if (mu.m() != kernel.m()) throw ShapeError("tail experiment: colour law and kernel over different alphabets");
  mu.require_probability("tail experiment: mu");
  if (sizes.empty()) throw DomainError("tail experiment: no sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) throw DomainError("tail experiment: sizes must be >= 2");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw DomainError("tail experiment: sizes must be increasing");
  }
  if (!replicas_per_size.empty() && replicas_per_size.size() != sizes.size())
    throw ShapeError("tail experiment: replicas_per_size must match sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (replicas_at(i) < 1) throw DomainError("tail experiment: replicas must be >= 1");
  if (event.kind == EventKind::PairAtLeast && (event.a >= mu.m() || event.b >= mu.m()))
    throw ShapeError("tail experiment: pair event colour out of range");
  if (proposal) {
    if (proposal->m() != kernel.m()) throw ShapeError("tail experiment: proposal kernel alphabet mismatch");
    for (std::size_t i = 0; i < kernel.values().size(); ++i)
      if (kernel.values()[i] > 0.0 && !(proposal->values()[i] > 0.0))
        throw DomainError("tail experiment: proposal kernel must be positive wherever the kernel is");
    for (std::uint64_t n : sizes) {
      for (double v : kernel.values())
        if (v >= static_cast<double>(n)) throw DomainError("tail experiment: importance sampling needs p < 1");
      for (double v : proposal->values())
        if (v >= static_cast<double>(n)) throw DomainError("tail experiment: importance sampling needs p < 1");
    }
  }
}

std::uint64_t TailExperiment::replicas_at(std::size_t index) const {
  return replicas_per_size.empty() ? replicas : replicas_per_size[index];
}

ExponentEstimate estimate_tail_exponent(const TailExperiment& experiment) {
  experiment.validate();
  ExponentEstimate out;
  out.importance_sampled = experiment.proposal.has_value();
  const unsigned threads = std::max(1u, experiment.threads);
  for (std::size_t si = 0; si < experiment.sizes.size(); ++si) {
    const std::uint64_t n = experiment.sizes[si];
    const std::uint64_t replicas = experiment.replicas_at(si);
    const std::uint64_t blocks = (replicas + kBlock - 1) / kBlock;
    std::vector<BlockSums> sums(blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      ReplicaRunner runner(experiment, n);
      for (std::uint64_t bi = next++; bi < blocks; bi = next++) {
        BlockSums s;
        const std::uint64_t lo = bi * kBlock, hi = std::min(replicas, lo + kBlock);
        for (std::uint64_t r = lo; r < hi; ++r) {
          const auto [hit, log_w] =
              runner.run(derive_seed(experiment.seed, n, experiment.first_replica + r));
          if (!hit) continue;
          ++s.hits;
          const double w = std::exp(log_w);
          s.weight += w;
          s.weight_sq += w * w;
        }
        sums[bi] = s;
      }
    };
    if (threads == 1 || blocks == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < std::min<std::uint64_t>(threads, blocks); ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    SizeEstimate est;
    est.n = n;
    est.replicas = replicas;
    for (const auto& s : sums) {
      est.hits += s.hits;
      est.weight_sum += s.weight;
      est.weight_sq_sum += s.weight_sq;
    }
    finish(est, out.importance_sampled);
    out.per_size.push_back(est);
  }
  out.inconclusive = std::all_of(out.per_size.begin(), out.per_size.end(),
                                 [](const SizeEstimate& s) { return s.hits == 0; });
  out.fit = fit_exponent(out.per_size);
  return out;
}

ExponentEstimate merge_estimates(const ExponentEstimate& x, const ExponentEstimate& y) {
  if (x.per_size.size() != y.per_size.size() || x.importance_sampled != y.importance_sampled)
    throw ShapeError("merge: experiments differ");
  ExponentEstimate out;
  out.importance_sampled = x.importance_sampled;
  for (std::size_t i = 0; i < x.per_size.size(); ++i) {
    const SizeEstimate& a = x.per_size[i];
    const SizeEstimate& b = y.per_size[i];
    if (a.n != b.n) throw ShapeError("merge: sizes differ");
    SizeEstimate s;
    s.n = a.n;
    s.replicas = a.replicas + b.replicas;
    s.hits = a.hits + b.hits;
    s.weight_sum = a.weight_sum + b.weight_sum;
    s.weight_sq_sum = a.weight_sq_sum + b.weight_sq_sum;
    s.rate_prediction = a.rate_prediction;
    finish(s, out.importance_sampled);
    out.per_size.push_back(s);
  }
  out.inconclusive = std::all_of(out.per_size.begin(), out.per_size.end(),
                                 [](const SizeEstimate& s) { return s.hits == 0; });
  out.fit = fit_exponent(out.per_size);
  return out;
}

ExponentFit fit_exponent(const std::vector<SizeEstimate>& per_size) {
  ExponentFit fit;
  std::vector<double> xs, ys, ws;
  for (const auto& s : per_size) {
    if (s.hits == 0 || !(s.p_hat > 0.0)) continue;
    const double var = std::max(std::pow(s.p_se / s.p_hat, 2), 1e-12);
    xs.push_back(static_cast<double>(s.n));
    ys.push_back(-std::log(s.p_hat));
    ws.push_back(1.0 / var);
    fit.sizes_used.push_back(s.n);
  }
  if (xs.size() < 2) return fit;
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
    sxx += ws[i] * xs[i] * xs[i];
    sxy += ws[i] * xs[i] * ys[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 0.0)) return fit;
  fit.available = true;
  fit.rate = (sw * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.rate * sx) / sw;
  fit.rate_se = std::sqrt(sw / det);
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - (fit.rate * xs[i] + fit.intercept));
  return fit;
}

double exact_er_edge_exponent(std::uint64_t n, double c, double x) {
  if (n < 2) throw DomainError("edge exponent: n must be >= 2");
  if (!(c > 0.0)) throw DomainError("edge exponent: c must be positive");
  if (x < 0.0) throw DomainError("edge exponent: x must be nonnegative");
  const std::uint64_t slots = n * (n - 1) / 2;
  const double p = std::min(c / static_cast<double>(n), 1.0);
  const double xn = x * static_cast<double>(n);
  if (xn < static_cast<double>(slots) * p) {
    // Below the mean: P(|E| <= floor(x n)) as an upper tail of the non-edges.
    const double f = std::floor(xn + 1e-9 * std::max(1.0, xn));
    const auto k = static_cast<std::uint64_t>(std::min(f, static_cast<double>(slots)));
    return -binomial_log_tail(slots, 1.0 - p, slots - k) / static_cast<double>(n);
  }
  const std::uint64_t k = count_threshold(x, n);
  if (k > slots) return kInf;
  return -binomial_log_tail(slots, p, k) / static_cast<double>(n);
}

InverseSizeFit fit_inverse_size(const std::vector<std::uint64_t>& sizes, const std::vector<double>& values) {
  if (sizes.size() != values.size() || sizes.size() < 2) throw DomainError("inverse-size fit: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = 1.0 / static_cast<double>(sizes[i]);
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
  }
  InverseSizeFit fit;
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.limit = (sy - fit.slope * sx) / k;
  return fit;
}

std::string to_csv(const ExponentEstimate& estimate) {
  auto num = [](double v) {
    if (std::isnan(v)) return std::string();
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "n,replicas,hits,p_hat,exponent,rate_prediction,ci_half_width\n";
  for (const auto& s : estimate.per_size) {
    os << s.n << ',' << s.replicas << ',' << s.hits << ',' << num(s.p_hat) << ',' << num(s.exponent) << ','
       << num(s.rate_prediction) << ',' << num(s.ci_half_width()) << '\n';
  }
  return os.str();
}

double LlnReport::quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> LlnReport::column(double LlnSample::*field) const {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.*field);
  return out;
}

LlnReport lln_check(const ModelParams& params, const std::vector<std::uint64_t>& seeds) {
  const std::size_t m = params.mu.m();
  const double nd = static_cast<double>(params.n);
  const PairMeasure limit_pairs = product_kernel_measure(params.kernel, params.mu);
  const DegreeDistribution limit_degrees = poisson_mixture_degree_law(params.mu, params.kernel);
  LlnReport report;
  report.n = params.n;
  for (std::uint64_t seed : seeds) {
    const ColoredGraph g = sample_colored_graph(params, seed);
    const EmpiricalMeasures em = empirical_measures(g);
    LlnSample s;
    s.seed = seed;

    DegreeDistribution d;
    for (const auto& [atom, count] : em.neighborhoods.atoms) {
      const std::uint64_t k = atom.ell.magnitude();
      if (d.pmf.size() <= k) d.pmf.resize(k + 1, 0.0);
      d.pmf[k] += static_cast<double>(count) / nd;
      s.max_degree = std::max(s.max_degree, k);
    }
    s.tv_degree = total_variation(d, limit_degrees);

    double diff = 0.0, covered = 0.0;
    for (const auto& [atom, count] : em.neighborhoods.atoms) {
      const double lq = log_q(limit_pairs, params.mu, atom);
      const double q = lq == -kInf ? 0.0 : std::exp(lq);
      diff += std::abs(static_cast<double>(count) / nd - q);
      covered += q;
    }
    s.tv_neighborhood = 0.5 * (diff + std::max(0.0, 1.0 - covered));

    const ColorMeasure l1 = em.colors.measure();
    s.tv_colors = total_variation(l1, params.mu);
    s.colors_within_envelope = true;
    for (std::size_t a = 0; a < m; ++a) {
      const double dev = std::abs(l1[a] - params.mu[a]);
      s.max_color_deviation = std::max(s.max_color_deviation, dev);
      const double env = 3.0 * std::sqrt(params.mu[a] * (1.0 - params.mu[a]) / nd);
      if (dev > env) s.colors_within_envelope = false;
    }
    const PairMeasure l2 = em.pairs.measure();
    s.max_pair_deviation = l2.max_abs_diff(limit_pairs);
    report.samples.push_back(s);
  }
  return report;
}

std::vector<std::uint64_t> published_seeds() {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 20; ++i) seeds.push_back(20260101 + 7919 * i);
  return seeds;
}

}  // namespace ldg
