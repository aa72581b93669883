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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ldg {

// Absolute tolerance for probability normalisation and consistency tests on
// real-valued measures.
inline constexpr double kMeasureTol = 1e-12;

// Finite colour set {0, ..., m-1}, m >= 1.
class Alphabet {
 public:
  explicit Alphabet(std::size_t m);
  std::size_t size() const noexcept { return m_; }
  friend bool operator==(Alphabet, Alphabet) = default;

 private:
  std::size_t m_;
};

// Nonnegative measure on the colour alphabet.
class ColorMeasure {
 public:
  explicit ColorMeasure(std::vector<double> weights);
  static ColorMeasure uniform(std::size_t m);
  static ColorMeasure point_mass(std::size_t m, std::size_t a);

  std::size_t m() const noexcept { return w_.size(); }
  Alphabet alphabet() const { return Alphabet(w_.size()); }
  double operator[](std::size_t a) const { return w_[a]; }
  std::span<const double> weights() const noexcept { return w_; }
  double total_mass() const;
  bool is_probability(double tol = kMeasureTol) const;
  void require_probability(const char* what) const;

  friend bool operator==(const ColorMeasure&, const ColorMeasure&) = default;

 private:
  std::vector<double> w_;
};

// Nonnegative m x m matrix measure on colour pairs, row-major. Constructed
// measures are symmetric; `unchecked` admits the raw (possibly asymmetric)
// second component of phi for an arbitrary neighbourhood measure.
class PairMeasure {
 public:
  PairMeasure(std::size_t m, std::vector<double> row_major);
  static PairMeasure zero(std::size_t m);
  static PairMeasure unchecked(std::size_t m, std::vector<double> row_major);

  std::size_t m() const noexcept { return m_; }
  double operator()(std::size_t a, std::size_t b) const { return w_[a * m_ + b]; }
  std::span<const double> weights() const noexcept { return w_; }
  double total_mass() const;
  bool is_symmetric() const;
  double max_abs_diff(const PairMeasure& other) const;

  friend bool operator==(const PairMeasure&, const PairMeasure&) = default;

 private:
  struct Unchecked {};
  PairMeasure(std::size_t m, std::vector<double> row_major, Unchecked);
  std::size_t m_;
  std::vector<double> w_;
};

// Symmetric nonnegative connection kernel, not identically zero.
class Kernel {
 public:
  Kernel(std::size_t m, std::vector<double> row_major);
  static Kernel constant(std::size_t m, double c);

  std::size_t m() const noexcept { return m_; }
  double operator()(std::size_t a, std::size_t b) const { return v_[a * m_ + b]; }
  std::span<const double> values() const noexcept { return v_; }

 private:
  std::size_t m_;
  std::vector<double> v_;
};

// Per-colour neighbour counts l(b) of a vertex; magnitude = degree.
struct DegreeVector {
  std::vector<std::uint64_t> counts;

  DegreeVector() = default;
  explicit DegreeVector(std::vector<std::uint64_t> c) : counts(std::move(c)) {}
  static DegreeVector zero(std::size_t m) { return DegreeVector(std::vector<std::uint64_t>(m, 0)); }

  std::size_t m() const noexcept { return counts.size(); }
  std::uint64_t operator[](std::size_t b) const { return counts[b]; }
  std::uint64_t magnitude() const noexcept;

  friend auto operator<=>(const DegreeVector&, const DegreeVector&) = default;
};

struct Atom {
  std::size_t color = 0;
  DegreeVector ell;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Finitely supported measure on (colour, degree vector). Every stored mass is
// strictly positive.
class NeighborhoodMeasure {
 public:
  using Support = std::map<Atom, double>;

  explicit NeighborhoodMeasure(std::size_t m);

  // Accumulates `mass` on `atom`; zero masses are ignored.
  void add(const Atom& atom, double mass);

  std::size_t m() const noexcept { return m_; }
  const Support& atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  double mass(const Atom& atom) const;
  double total_mass() const;
  bool is_probability(double tol = kMeasureTol) const;
  void require_probability(const char* what) const;
  NeighborhoodMeasure scaled(double factor) const;

 private:
  std::size_t m_;
  Support atoms_;
};

// Exact integer backing for n-empirical measures (counts divided by n).
struct ColorCounts {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> counts;

  void validate() const;
  ColorMeasure measure() const;
  friend bool operator==(const ColorCounts&, const ColorCounts&) = default;
};

// counts(a,b) = n * varpi(a,b): the number of a-b edges for a != b and twice
// the number of a-a edges on the diagonal.
struct PairCounts {
  std::uint64_t n = 0;
  std::size_t m = 0;
  std::vector<std::uint64_t> counts;

  static PairCounts zero(std::uint64_t n, std::size_t m);
  std::uint64_t operator()(std::size_t a, std::size_t b) const { return counts[a * m + b]; }
  std::uint64_t& at(std::size_t a, std::size_t b) { return counts[a * m + b]; }
  // Number of edges to create for the unordered colour pair {a, b}.
  std::uint64_t edges(std::size_t a, std::size_t b) const;
  std::uint64_t total() const;
  void validate() const;
  PairMeasure measure() const;
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

struct NeighborhoodCounts {
  std::uint64_t n = 0;
  std::size_t m = 0;
  std::map<Atom, std::uint64_t> atoms;

  void validate() const;
  NeighborhoodMeasure measure() const;
  friend bool operator==(const NeighborhoodCounts&, const NeighborhoodCounts&) = default;
};

// Degree law on {0, 1, 2, ...}. `infinite_mean` encodes <d> = infinity.
struct DegreeDistribution {
  std::vector<double> pmf;
  bool infinite_mean = false;

  double mean() const;
  double total_mass() const;
};

struct PhiImage {
  ColorMeasure colors;
  PairMeasure pairs;
};

struct PhiCounts {
  ColorCounts colors;
  PairCounts pairs;
};

// Relative entropy with 0 log 0 = 0 and x log(x/0) = +inf.
double relative_entropy(const ColorMeasure& nu, const ColorMeasure& mu);
double relative_entropy(const PairMeasure& nu, const PairMeasure& mu);
double relative_entropy(const NeighborhoodMeasure& nu, const NeighborhoodMeasure& mu);
double relative_entropy(const DegreeDistribution& d, const DegreeDistribution& q);

double total_variation(const NeighborhoodMeasure& nu, const NeighborhoodMeasure& other);
double total_variation(const ColorMeasure& nu, const ColorMeasure& other);
double total_variation(const DegreeDistribution& d, const DegreeDistribution& other);

// C w (x) w (a, b) = C(a, b) w(a) w(b).
PairMeasure product_kernel_measure(const Kernel& kernel, const ColorMeasure& omega);

// (nu_1, <nu(., l), l(.)>). The pair component is returned as computed and
// may be asymmetric when nu does not come from a graph.
PhiImage phi(const NeighborhoodMeasure& nu);
PhiCounts phi(const NeighborhoodCounts& nu);

// <nu(., l), l(.)>(a, b) <= varpi(a, b) + tol for all a, b.
bool is_sub_consistent(const PairMeasure& varpi, const NeighborhoodMeasure& nu,
                       double tol = kMeasureTol);
bool is_consistent(const PairMeasure& varpi, const NeighborhoodMeasure& nu,
                   double tol = kMeasureTol);

DegreeDistribution degree_distribution(const NeighborhoodMeasure& nu);

// Rounds a probability vector to counts summing to n (largest remainder).
ColorCounts round_color_counts(const ColorMeasure& omega, std::uint64_t n);
// Rounds n * varpi up to integers, symmetric, with even diagonal.
PairCounts round_pair_counts_up(const PairMeasure& varpi, std::uint64_t n);

struct Consistified {
  PairMeasure pairs;
  NeighborhoodMeasure nu;
  std::uint64_t shift_scale = 0;  // internal n of the construction; 0 if unchanged
};

// Moves mass onto atoms n e^(b) so the pair becomes exactly consistent,
// within eps entrywise and in total variation.
Consistified consistify(const PairMeasure& varpi, const NeighborhoodMeasure& nu, double eps);

struct QuantizeOptions {
  double epsilon = 0.05;
  int max_retries = 8;
};

// Randomised n-empirical approximation of nu with phi(result) = (omega_n, varpi_n).
NeighborhoodCounts quantize(const ColorCounts& omega_n, const PairCounts& varpi_n,
                            const NeighborhoodMeasure& nu, std::uint64_t seed,
                            const QuantizeOptions& options = {});

// Largest integer k with k^3 <= n.
std::uint64_t degree_cap(std::uint64_t n);

// Moves degree mass off vertices of magnitude above n^(1/3) onto low-degree
// vertices of the same colour, preserving phi exactly.
NeighborhoodCounts cap_degrees(const NeighborhoodCounts& nu_n);

struct ApproximationReport {
  Consistified consistent;
  ColorCounts omega_n;
  PairCounts varpi_n;
  NeighborhoodCounts quantized;
  NeighborhoodCounts capped;
  double tv_consistify = 0;
  double tv_quantized = 0;
  double tv_capped = 0;
};

// consistify -> round to (omega_n, varpi_n) -> quantize -> cap_degrees.
ApproximationReport approximate(const PairMeasure& varpi, const NeighborhoodMeasure& nu,
                                std::uint64_t n, double eps, std::uint64_t seed);

}  // namespace ldg
