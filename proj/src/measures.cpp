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

#include "ldg/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ldg/errors.hpp"
#include "ldg/rng.hpp"

namespace ldg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weights(std::span<const double> w, const char* what) {
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw DomainError(std::string(what) + ": weights must be finite and nonnegative");
    }
  }
}

// nu * log(nu / mu) with the 0 log 0 and x log(x/0) conventions.
double entropy_term(double nu, double mu) {
  if (nu == 0.0) return 0.0;
  if (mu == 0.0) return kInf;
  return nu * std::log(nu / mu);
}

}  // namespace

Alphabet::Alphabet(std::size_t m) : m_(m) {
  if (m == 0) throw DomainError("alphabet must contain at least one colour");
}

// ---------------------------------------------------------------- ColorMeasure

ColorMeasure::ColorMeasure(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw DomainError("colour measure over an empty alphabet");
  check_weights(w_, "colour measure");
}

ColorMeasure ColorMeasure::uniform(std::size_t m) {
  Alphabet{m};
  return ColorMeasure(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

ColorMeasure ColorMeasure::point_mass(std::size_t m, std::size_t a) {
  if (a >= m) throw ShapeError("point mass colour out of range");
  std::vector<double> w(m, 0.0);
  w[a] = 1.0;
  return ColorMeasure(std::move(w));
}

double ColorMeasure::total_mass() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

bool ColorMeasure::is_probability(double tol) const { return std::abs(total_mass() - 1.0) <= tol; }

void ColorMeasure::require_probability(const char* what) const {
  if (!is_probability()) throw DomainError(std::string(what) + " must be a probability measure");
}

// ----------------------------------------------------------------- PairMeasure

PairMeasure::PairMeasure(std::size_t m, std::vector<double> row_major, Unchecked)
    : m_(m), w_(std::move(row_major)) {
  Alphabet{m};
  if (w_.size() != m * m) throw ShapeError("pair measure needs m*m weights");
  check_weights(w_, "pair measure");
}

PairMeasure::PairMeasure(std::size_t m, std::vector<double> row_major)
    : PairMeasure(m, std::move(row_major), Unchecked{}) {
  for (std::size_t a = 0; a < m_; ++a) {
    for (std::size_t b = a + 1; b < m_; ++b) {
      if ((*this)(a, b) != (*this)(b, a)) {
        throw DomainError("pair measure not symmetric at (" + std::to_string(a) + "," +
                          std::to_string(b) + ")");
      }
    }
  }
}

PairMeasure PairMeasure::zero(std::size_t m) { return PairMeasure(m, std::vector<double>(m * m, 0.0)); }

PairMeasure PairMeasure::unchecked(std::size_t m, std::vector<double> row_major) {
  return PairMeasure(m, std::move(row_major), Unchecked{});
}

double PairMeasure::total_mass() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

bool PairMeasure::is_symmetric() const {
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = a + 1; b < m_; ++b)
      if ((*this)(a, b) != (*this)(b, a)) return false;
  return true;
}

double PairMeasure::max_abs_diff(const PairMeasure& other) const {
  if (other.m_ != m_) throw ShapeError("pair measures over different alphabets");
  double d = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) d = std::max(d, std::abs(w_[i] - other.w_[i]));
  return d;
}

// ---------------------------------------------------------------------- Kernel

Kernel::Kernel(std::size_t m, std::vector<double> row_major) : m_(m), v_(std::move(row_major)) {
  Alphabet{m};
  if (v_.size() != m * m) throw ShapeError("kernel needs m*m values");
  check_weights(v_, "kernel");
  std::string asym;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if ((*this)(a, b) != (*this)(b, a)) {
        asym += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
    }
  }
  if (!asym.empty()) throw DomainError("kernel not symmetric at" + asym);
  if (std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; })) {
    throw DomainError("kernel is identically zero");
  }
}

Kernel Kernel::constant(std::size_t m, double c) { return Kernel(m, std::vector<double>(m * m, c)); }

// ------------------------------------------------------------------ DegreeVector

std::uint64_t DegreeVector::magnitude() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

// ---------------------------------------------------------- NeighborhoodMeasure

NeighborhoodMeasure::NeighborhoodMeasure(std::size_t m) : m_(m) { Alphabet{m}; }

void NeighborhoodMeasure::add(const Atom& atom, double mass) {
  if (atom.color >= m_ || atom.ell.m() != m_) throw ShapeError("atom does not match the alphabet");
  if (!(mass >= 0.0) || !std::isfinite(mass)) {
    throw DomainError("neighbourhood masses must be finite and nonnegative");
  }
  if (mass == 0.0) return;
  atoms_[atom] += mass;
}

double NeighborhoodMeasure::mass(const Atom& atom) const {
  auto it = atoms_.find(atom);
  return it == atoms_.end() ? 0.0 : it->second;
}

double NeighborhoodMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& [atom, mass] : atoms_) s += mass;
  return s;
}

bool NeighborhoodMeasure::is_probability(double tol) const {
  return std::abs(total_mass() - 1.0) <= tol;
}

void NeighborhoodMeasure::require_probability(const char* what) const {
  if (!is_probability()) throw DomainError(std::string(what) + " must be a probability measure");
}

NeighborhoodMeasure NeighborhoodMeasure::scaled(double factor) const {
  NeighborhoodMeasure out(m_);
  for (const auto& [atom, mass] : atoms_) out.add(atom, mass * factor);
  return out;
}

// ------------------------------------------------------------------- counts

void ColorCounts::validate() const {
  if (n == 0) throw DomainError("empirical counts need n >= 1");
  Alphabet{counts.size()};
  if (std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) != n) {
    throw DomainError("colour counts do not sum to n");
  }
}

ColorMeasure ColorCounts::measure() const {
  validate();
  std::vector<double> w(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    w[a] = static_cast<double>(counts[a]) / static_cast<double>(n);
  }
  return ColorMeasure(std::move(w));
}

PairCounts PairCounts::zero(std::uint64_t n, std::size_t m) {
  return PairCounts{n, m, std::vector<std::uint64_t>(m * m, 0)};
}

std::uint64_t PairCounts::edges(std::size_t a, std::size_t b) const {
  return a == b ? (*this)(a, a) / 2 : (*this)(a, b);
}

std::uint64_t PairCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void PairCounts::validate() const {
  if (n == 0) throw DomainError("empirical counts need n >= 1");
  Alphabet{m};
  if (counts.size() != m * m) throw ShapeError("pair counts need m*m entries");
  for (std::size_t a = 0; a < m; ++a) {
    if ((*this)(a, a) % 2 != 0) {
      throw DomainError("diagonal pair count at colour " + std::to_string(a) + " must be even");
    }
    for (std::size_t b = a + 1; b < m; ++b) {
      if ((*this)(a, b) != (*this)(b, a)) throw DomainError("pair counts not symmetric");
    }
  }
}

PairMeasure PairCounts::measure() const {
  validate();
  std::vector<double> w(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    w[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }
  return PairMeasure(m, std::move(w));
}

void NeighborhoodCounts::validate() const {
  if (n == 0) throw DomainError("empirical counts need n >= 1");
  Alphabet{m};
  std::uint64_t total = 0;
  for (const auto& [atom, count] : atoms) {
    if (atom.color >= m || atom.ell.m() != m) throw ShapeError("atom does not match the alphabet");
    if (count == 0) throw DomainError("zero count stored in neighbourhood counts");
    total += count;
  }
  if (total != n) throw DomainError("neighbourhood counts do not sum to n");
}

NeighborhoodMeasure NeighborhoodCounts::measure() const {
  validate();
  NeighborhoodMeasure out(m);
  for (const auto& [atom, count] : atoms) {
    out.add(atom, static_cast<double>(count) / static_cast<double>(n));
  }
  return out;
}

double DegreeDistribution::mean() const {
  if (infinite_mean) return kInf;
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) s += static_cast<double>(k) * pmf[k];
  return s;
}

double DegreeDistribution::total_mass() const { return std::accumulate(pmf.begin(), pmf.end(), 0.0); }

// ------------------------------------------------------------- entropy / TV

double relative_entropy(const ColorMeasure& nu, const ColorMeasure& mu) {
  if (nu.m() != mu.m()) throw ShapeError("relative entropy: alphabet mismatch");
  double h = 0.0;
  for (std::size_t a = 0; a < nu.m(); ++a) h += entropy_term(nu[a], mu[a]);
  return h;
}

double relative_entropy(const PairMeasure& nu, const PairMeasure& mu) {
  if (nu.m() != mu.m()) throw ShapeError("relative entropy: alphabet mismatch");
  double h = 0.0;
  auto x = nu.weights();
  auto y = mu.weights();
  for (std::size_t i = 0; i < x.size(); ++i) h += entropy_term(x[i], y[i]);
  return h;
}

double relative_entropy(const NeighborhoodMeasure& nu, const NeighborhoodMeasure& mu) {
  if (nu.m() != mu.m()) throw ShapeError("relative entropy: alphabet mismatch");
  double h = 0.0;
  for (const auto& [atom, mass] : nu.atoms()) h += entropy_term(mass, mu.mass(atom));
  return h;
}

double relative_entropy(const DegreeDistribution& d, const DegreeDistribution& q) {
  double h = 0.0;
  for (std::size_t k = 0; k < d.pmf.size(); ++k) {
    h += entropy_term(d.pmf[k], k < q.pmf.size() ? q.pmf[k] : 0.0);
  }
  return h;
}

double total_variation(const NeighborhoodMeasure& nu, const NeighborhoodMeasure& other) {
  if (nu.m() != other.m()) throw ShapeError("total variation: alphabet mismatch");
  nu.require_probability("total variation argument");
  other.require_probability("total variation argument");
  double s = 0.0;
  for (const auto& [atom, mass] : nu.atoms()) s += std::abs(mass - other.mass(atom));
  for (const auto& [atom, mass] : other.atoms()) {
    if (!nu.atoms().contains(atom)) s += mass;
  }
  return 0.5 * s;
}

double total_variation(const ColorMeasure& nu, const ColorMeasure& other) {
  if (nu.m() != other.m()) throw ShapeError("total variation: alphabet mismatch");
  double s = 0.0;
  for (std::size_t a = 0; a < nu.m(); ++a) s += std::abs(nu[a] - other[a]);
  return 0.5 * s;
}

double total_variation(const DegreeDistribution& d, const DegreeDistribution& other) {
  const std::size_t len = std::max(d.pmf.size(), other.pmf.size());
  double s = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = k < d.pmf.size() ? d.pmf[k] : 0.0;
    const double y = k < other.pmf.size() ? other.pmf[k] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

// ------------------------------------------------------------------ phi etc.

PairMeasure product_kernel_measure(const Kernel& kernel, const ColorMeasure& omega) {
  const std::size_t m = kernel.m();
  if (omega.m() != m) throw ShapeError("product kernel measure: alphabet mismatch");
  std::vector<double> w(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) w[a * m + b] = w[b * m + a] = kernel(a, b) * (omega[a] * omega[b]);
  return PairMeasure(m, std::move(w));
}

PhiImage phi(const NeighborhoodMeasure& nu) {
  const std::size_t m = nu.m();
  std::vector<double> colors(m, 0.0);
  std::vector<double> pairs(m * m, 0.0);
  for (const auto& [atom, mass] : nu.atoms()) {
    colors[atom.color] += mass;
    for (std::size_t b = 0; b < m; ++b) {
      pairs[atom.color * m + b] += mass * static_cast<double>(atom.ell[b]);
    }
  }
  return {ColorMeasure(std::move(colors)), PairMeasure::unchecked(m, std::move(pairs))};
}

PhiCounts phi(const NeighborhoodCounts& nu) {
  nu.validate();
  const std::size_t m = nu.m;
  ColorCounts colors{nu.n, std::vector<std::uint64_t>(m, 0)};
  PairCounts pairs = PairCounts::zero(nu.n, m);
  for (const auto& [atom, count] : nu.atoms) {
    colors.counts[atom.color] += count;
    for (std::size_t b = 0; b < m; ++b) pairs.at(atom.color, b) += count * atom.ell[b];
  }
  return {std::move(colors), std::move(pairs)};
}

bool is_sub_consistent(const PairMeasure& varpi, const NeighborhoodMeasure& nu, double tol) {
  if (varpi.m() != nu.m()) throw ShapeError("sub-consistency: alphabet mismatch");
  const PairMeasure induced = phi(nu).pairs;
  auto x = induced.weights();
  auto y = varpi.weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i] + tol) return false;
  }
  return true;
}

bool is_consistent(const PairMeasure& varpi, const NeighborhoodMeasure& nu, double tol) {
  if (varpi.m() != nu.m()) throw ShapeError("consistency: alphabet mismatch");
  return phi(nu).pairs.max_abs_diff(varpi) <= tol;
}

DegreeDistribution degree_distribution(const NeighborhoodMeasure& nu) {
  DegreeDistribution d;
  for (const auto& [atom, mass] : nu.atoms()) {
    const auto k = static_cast<std::size_t>(atom.ell.magnitude());
    if (k >= d.pmf.size()) d.pmf.resize(k + 1, 0.0);
    d.pmf[k] += mass;
  }
  if (d.pmf.empty()) d.pmf.push_back(0.0);
  return d;
}

ColorCounts round_color_counts(const ColorMeasure& omega, std::uint64_t n) {
  omega.require_probability("colour law to round");
  if (n == 0) throw DomainError("n must be positive");
  const std::size_t m = omega.m();
  ColorCounts out{n, std::vector<std::uint64_t>(m, 0)};
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t used = 0;
  for (std::size_t a = 0; a < m; ++a) {
    const double target = omega[a] * static_cast<double>(n);
    const auto base = static_cast<std::uint64_t>(std::floor(target));
    out.counts[a] = base;
    used += base;
    remainders.emplace_back(target - static_cast<double>(base), a);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) out.counts[remainders[i % m].second] += 1;
  while (used > n) {  // only reachable through rounding noise in omega
    auto it = std::max_element(out.counts.begin(), out.counts.end());
    --*it;
    --used;
  }
  return out;
}

PairCounts round_pair_counts_up(const PairMeasure& varpi, std::uint64_t n) {
  if (n == 0) throw DomainError("n must be positive");
  const std::size_t m = varpi.m();
  PairCounts out = PairCounts::zero(n, m);
  const double scale = static_cast<double>(n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const double target = std::max(varpi(a, b), varpi(b, a)) * scale;
      auto k = static_cast<std::uint64_t>(std::ceil(target - 1e-9));
      if (a == b && k % 2 != 0) ++k;
      out.at(a, b) = k;
      out.at(b, a) = k;
    }
  }
  return out;
}

// ----------------------------------------------------------- approximation

Consistified consistify(const PairMeasure& varpi, const NeighborhoodMeasure& nu, double eps) {
  if (varpi.m() != nu.m()) throw ShapeError("consistify: alphabet mismatch");
  if (!(eps > 0.0)) throw DomainError("consistify: eps must be positive");
  nu.require_probability("consistify neighbourhood measure");
  if (!is_sub_consistent(varpi, nu)) throw DomainError("consistify: pair is not sub-consistent");
  const std::size_t m = nu.m();
  const PairMeasure induced = phi(nu).pairs;
  if (induced.max_abs_diff(varpi) <= kMeasureTol) return {varpi, nu, 0};

  // Entrywise deficit, clipped at zero where the tolerance admitted a tiny excess.
  std::vector<double> deficit(m * m);
  double shift = 0.0;
  for (std::size_t i = 0; i < m * m; ++i) {
    deficit[i] = std::max(0.0, varpi.weights()[i] - induced.weights()[i]);
    shift += deficit[i];
  }
  // |varpi - varpi_hat| = (shift/n) * induced <= mass^2 / n and d(nu, nu_hat) <= shift/n.
  const double mass = varpi.total_mass();
  const double need = std::max(std::ceil((mass + 1.0) * (mass + 1.0) / eps), std::floor(shift) + 1.0);
  if (need > 1e15) throw DomainError("consistify: eps too small for the mass of varpi");
  const auto scale = static_cast<std::uint64_t>(need);
  const double inv = 1.0 / static_cast<double>(scale);

  NeighborhoodMeasure out(m);
  for (const auto& [atom, w] : nu.atoms()) out.add(atom, w * (1.0 - shift * inv));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (deficit[a * m + b] == 0.0) continue;
      DegreeVector ell = DegreeVector::zero(m);
      ell.counts[b] = scale;
      out.add(Atom{a, std::move(ell)}, deficit[a * m + b] * inv);
    }
  }
  return {phi(out).pairs, std::move(out), scale};
}

namespace {

// Builds counts directly when nu is already n-empirical with the requested image.
bool try_exact_counts(const ColorCounts& omega_n, const PairCounts& varpi_n,
                      const NeighborhoodMeasure& nu, NeighborhoodCounts& out) {
  const double n = static_cast<double>(omega_n.n);
  NeighborhoodCounts counts{omega_n.n, nu.m(), {}};
  for (const auto& [atom, mass] : nu.atoms()) {
    const double k = mass * n;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, n) || r < 1.0) return false;
    counts.atoms[atom] = static_cast<std::uint64_t>(r);
  }
  std::uint64_t total = 0;
  for (const auto& [atom, c] : counts.atoms) total += c;
  if (total != omega_n.n) return false;
  const PhiCounts image = phi(counts);
  if (image.colors != omega_n || image.pairs.counts != varpi_n.counts) return false;
  out = std::move(counts);
  return true;
}

// Discrete sampler over the atoms of one colour (cumulative masses).
struct ConditionalLaw {
  std::vector<const DegreeVector*> support;
  std::vector<double> cumulative;

  const DegreeVector* draw(Rng& rng) const {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return support[static_cast<std::size_t>(it - cumulative.begin())];
  }
};

}  // namespace

NeighborhoodCounts quantize(const ColorCounts& omega_n, const PairCounts& varpi_n,
                            const NeighborhoodMeasure& nu, std::uint64_t seed,
                            const QuantizeOptions& options) {
  omega_n.validate();
  varpi_n.validate();
  const std::size_t m = nu.m();
  if (omega_n.counts.size() != m || varpi_n.m != m || varpi_n.n != omega_n.n) {
    throw ShapeError("quantize: inputs over different alphabets or sizes");
  }
  nu.require_probability("quantize target");
  if (!(options.epsilon > 0.0)) throw DomainError("quantize: epsilon must be positive");
  if (!is_sub_consistent(varpi_n.measure(), nu, 1e-9)) {
    throw DomainError("quantize: (varpi_n, nu) is not sub-consistent");
  }
  for (std::size_t a = 0; a < m; ++a) {
    if (omega_n.counts[a] > 0) continue;
    for (std::size_t b = 0; b < m; ++b) {
      if (varpi_n(a, b) > 0) {
        throw InfeasibleError("quantize: colour " + std::to_string(a) +
                              " has no vertices but positive pair mass");
      }
    }
  }

  NeighborhoodCounts exact;
  if (try_exact_counts(omega_n, varpi_n, nu, exact)) return exact;

  // Sub-consistency makes nu itself an admissible sampling law: the mean of
  // l(b) under nu(.|a) is at most varpi(a,b)/nu_1(a), so undershoot is the
  // typical repair and overshoot is a fluctuation.
  std::vector<ConditionalLaw> laws(m);
  for (const auto& [atom, mass] : nu.atoms()) {
    auto& law = laws[atom.color];
    law.support.push_back(&atom.ell);
    law.cumulative.push_back((law.cumulative.empty() ? 0.0 : law.cumulative.back()) + mass);
  }

  Rng rng(seed);
  const DegreeVector zero = DegreeVector::zero(m);
  NeighborhoodCounts out{omega_n.n, m, {}};
  for (std::size_t a = 0; a < m; ++a) {
    const std::uint64_t count = omega_n.counts[a];
    if (count == 0) continue;
    std::vector<DegreeVector> draws;
    draws.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) {
      draws.push_back(laws[a].support.empty() ? zero : *laws[a].draw(rng));
    }
    for (std::size_t b = 0; b < m; ++b) {
      std::uint64_t sum = 0;
      for (const auto& ell : draws) sum += ell[b];
      const std::uint64_t target = varpi_n(a, b);
      if (sum < target) {
        draws.back().counts[b] += target - sum;
      } else if (sum > target) {
        // Deduct one from each nonzero entry in index order, pass after pass.
        std::uint64_t excess = sum - target;
        while (excess > 0) {
          for (auto& ell : draws) {
            if (excess == 0) break;
            if (ell.counts[b] > 0) {
              --ell.counts[b];
              --excess;
            }
          }
        }
      }
    }
    for (auto& ell : draws) out.atoms[Atom{a, std::move(ell)}] += 1;
  }

  const PhiCounts image = phi(out);
  if (image.colors != omega_n || image.pairs.counts != varpi_n.counts) {
    throw InfeasibleError("quantize: repair failed to reach the target image");
  }
  (void)options.max_retries;
  return out;
}

std::uint64_t degree_cap(std::uint64_t n) {
  auto k = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (k > 0 && k * k * k > n) --k;
  while ((k + 1) * (k + 1) * (k + 1) <= n) ++k;
  return k;
}

NeighborhoodCounts cap_degrees(const NeighborhoodCounts& nu_n) {
  nu_n.validate();
  const std::size_t m = nu_n.m;
  const std::uint64_t cap = degree_cap(nu_n.n);
  const std::uint64_t low = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(nu_n.n), 0.25)));

  bool within = true;
  for (const auto& [atom, count] : nu_n.atoms) within = within && atom.ell.magnitude() <= cap;
  if (within) return nu_n;

  NeighborhoodCounts out{nu_n.n, m, {}};
  for (std::size_t a = 0; a < m; ++a) {
    // Expand colour a into one vector per vertex.
    std::vector<DegreeVector> vertices;
    std::uint64_t total_degree = 0;
    for (const auto& [atom, count] : nu_n.atoms) {
      if (atom.color != a) continue;
      for (std::uint64_t i = 0; i < count; ++i) vertices.push_back(atom.ell);
      total_degree += count * atom.ell.magnitude();
    }
    if (vertices.empty()) continue;
    if (total_degree > cap * vertices.size()) {
      throw InfeasibleError("cap_degrees: colour " + std::to_string(a) +
                            " carries more degree than n^(1/3) per vertex allows");
    }
    // V+: trim to magnitude exactly cap, always from the largest entry.
    std::vector<std::uint64_t> excess(m, 0);
    for (auto& ell : vertices) {
      std::uint64_t mag = ell.magnitude();
      while (mag > cap) {
        auto it = std::max_element(ell.counts.begin(), ell.counts.end());
        std::uint64_t second = 0;
        for (auto jt = ell.counts.begin(); jt != ell.counts.end(); ++jt) {
          if (jt != it) second = std::max(second, *jt);
        }
        const std::uint64_t step = std::min(mag - cap, std::max<std::uint64_t>(1, *it - second));
        *it -= step;
        excess[static_cast<std::size_t>(it - ell.counts.begin())] += step;
        mag -= step;
      }
    }
    // Refill: V- (magnitude <= n^(1/4)) first, then any vertex with room.
    for (int pass = 0; pass < 2; ++pass) {
      for (auto& ell : vertices) {
        std::uint64_t mag = ell.magnitude();
        if (pass == 0 && mag > low) continue;
        for (std::size_t b = 0; b < m && mag < cap; ++b) {
          const std::uint64_t put = std::min(excess[b], cap - mag);
          ell.counts[b] += put;
          excess[b] -= put;
          mag += put;
        }
      }
    }
    for (std::size_t b = 0; b < m; ++b) {
      if (excess[b] != 0) throw InfeasibleError("cap_degrees: could not place excess degree");
    }
    for (auto& ell : vertices) out.atoms[Atom{a, std::move(ell)}] += 1;
  }
  return out;
}

ApproximationReport approximate(const PairMeasure& varpi, const NeighborhoodMeasure& nu,
                                std::uint64_t n, double eps, std::uint64_t seed) {
  Consistified step1 = consistify(varpi, nu, eps);
  ColorCounts omega_n = round_color_counts(phi(nu).colors, n);
  PairCounts varpi_n = round_pair_counts_up(varpi, n);
  NeighborhoodCounts quantized = quantize(omega_n, varpi_n, nu, seed, QuantizeOptions{eps, 8});
  NeighborhoodCounts capped = cap_degrees(quantized);
  const double tv1 = total_variation(nu, step1.nu);
  const double tv2 = total_variation(nu, quantized.measure());
  const double tv3 = total_variation(nu, capped.measure());
  return {std::move(step1), std::move(omega_n), std::move(varpi_n), std::move(quantized),
          std::move(capped), tv1, tv2, tv3};
}

}  // namespace ldg
