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

#include "ldg/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg::io {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

std::uint64_t count_from(const Json& j, const char* what) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0))
    throw ParseError(std::string(what) + ": expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> reals_from(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(real_from(x, what));
  return out;
}

std::vector<std::uint64_t> counts_from(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<std::uint64_t> out;
  for (const auto& x : j) out.push_back(count_from(x, what));
  return out;
}

std::vector<double> rows_from(const Json& j, std::size_t& m, const char* what) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a nonempty array of rows");
  m = j.size();
  std::vector<double> out;
  for (const auto& row : j) {
    auto r = reals_from(row, what);
    if (r.size() != m) throw ShapeError(std::string(what) + ": matrix is not square");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

std::size_t check_m(const Json& j, std::size_t actual, const char* what) {
  if (j.is_object() && j.contains("m")) {
    const std::uint64_t m = count_from(j["m"], what);
    if (m != actual) throw ShapeError(std::string(what) + ": \"m\" disagrees with the data");
  }
  return actual;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("; "); pos != std::string::npos) msg = msg.substr(pos + 2);
    std::ostringstream os;
    os << source << ':' << line << ':' << col << ": " << msg;
    throw ParseError(os.str());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

Json real(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  if (std::isnan(v)) return Json(nullptr);
  return Json(v);
}

double real_from(const Json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ParseError(std::string(what) + ": expected a number");
}

Json to_json(const ColorMeasure& mu) {
  Json w = Json::array();
  for (double x : mu.weights()) w.push_back(x);
  return {{"m", mu.m()}, {"weights", w}};
}

Json to_json(const PairMeasure& varpi) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < varpi.m(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < varpi.m(); ++b) row.push_back(varpi(a, b));
    rows.push_back(row);
  }
  return {{"m", varpi.m()}, {"weights", rows}};
}

Json to_json(const NeighborhoodMeasure& nu) {
  Json atoms = Json::array();
  for (const auto& [atom, mass] : nu.atoms())
    atoms.push_back({{"color", atom.color}, {"ell", atom.ell.counts}, {"mass", mass}});
  return {{"m", nu.m()}, {"weights", atoms}};
}

Json to_json(const DegreeDistribution& d) {
  return {{"pmf", d.pmf}, {"infinite_mean", d.infinite_mean}};
}

Json to_json(const ColorCounts& c) { return {{"n", c.n}, {"counts", c.counts}}; }

Json to_json(const PairCounts& c) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < c.m; ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < c.m; ++b) row.push_back(c(a, b));
    rows.push_back(row);
  }
  return {{"n", c.n}, {"m", c.m}, {"counts", rows}};
}

Json to_json(const NeighborhoodCounts& c) {
  Json atoms = Json::array();
  for (const auto& [atom, count] : c.atoms)
    atoms.push_back({{"color", atom.color}, {"ell", atom.ell.counts}, {"count", count}});
  return {{"n", c.n}, {"m", c.m}, {"counts", atoms}};
}

Json to_json(const RateValue& r) {
  Json breakdown = Json::object();
  for (const auto& [name, v] : r.breakdown) breakdown[name] = real(v);
  return {{"value", real(r.value)}, {"breakdown", breakdown},
          {"reason", r.reason.empty() ? Json(nullptr) : Json(r.reason)}};
}

Json to_json(const SolveReport& r) {
  Json arg = Json::array();
  for (double x : r.argument) arg.push_back(real(x));
  return {{"argument", arg}, {"value", real(r.value)}, {"residual", real(r.residual)},
          {"iterations", r.iterations}, {"converged", r.converged}};
}

Json to_json(const ExponentEstimate& e) {
  Json sizes = Json::array();
  for (const auto& s : e.per_size) {
    sizes.push_back({{"n", s.n},
                     {"replicas", s.replicas},
                     {"hits", s.hits},
                     {"p_hat", real(s.p_hat)},
                     {"p_se", real(s.p_se)},
                     {"exponent", real(s.exponent)},
                     {"exponent_se", real(s.exponent_se)},
                     {"zero_hits", s.zero_hits},
                     {"exponent_lower_bound", real(s.exponent_lower_bound)},
                     {"rate_prediction", real(s.rate_prediction)},
                     {"ci_half_width", real(s.ci_half_width())}});
  }
  Json fit = {{"available", e.fit.available}};
  if (e.fit.available) {
    fit["rate"] = e.fit.rate;
    fit["intercept"] = e.fit.intercept;
    fit["rate_se"] = e.fit.rate_se;
    fit["residuals"] = e.fit.residuals;
    fit["sizes_used"] = e.fit.sizes_used;
  }
  return {{"importance_sampled", e.importance_sampled}, {"inconclusive", e.inconclusive},
          {"sizes", sizes}, {"fit", fit}};
}

Json to_json(const LlnReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"seed", s.seed},
                       {"tv_degree", s.tv_degree},
                       {"tv_neighborhood", s.tv_neighborhood},
                       {"tv_colors", s.tv_colors},
                       {"max_color_deviation", s.max_color_deviation},
                       {"colors_within_envelope", s.colors_within_envelope},
                       {"max_pair_deviation", s.max_pair_deviation},
                       {"max_degree", s.max_degree}});
  }
  Json summary = Json::object();
  for (auto [name, field] : {std::pair{"tv_degree", &LlnSample::tv_degree},
                             std::pair{"tv_neighborhood", &LlnSample::tv_neighborhood},
                             std::pair{"max_pair_deviation", &LlnSample::max_pair_deviation}}) {
    const auto col = r.column(field);
    summary[name] = {{"median", real(LlnReport::quantile(col, 0.5))},
                     {"q95", real(LlnReport::quantile(col, 0.95))}};
  }
  return {{"n", r.n}, {"samples", samples}, {"summary", summary}};
}

Json to_json(const PartitionBoundReport& r) {
  Json vec = Json::array();
  for (const auto& e : r.vector_entries) {
    vec.push_back({{"magnitude", e.magnitude}, {"max_count", e.max_count.str()},
                   {"argmax", e.argmax.counts}, {"theta_hat", e.theta_hat}, {"holds", e.holds}});
  }
  Json scalar = Json::array();
  for (const auto& e : r.scalar_entries) {
    scalar.push_back({{"magnitude", e.magnitude}, {"count", e.count.str()}, {"log_count", e.log_count},
                      {"log_bound", e.log_bound}, {"holds", e.holds}});
  }
  return {{"m", r.m}, {"vector", vec}, {"scalar", scalar}, {"holds", r.holds}};
}

Json to_json(const SupportBoundReport& r) {
  return {{"support", r.support}, {"bound", r.bound}, {"C", r.constant_c}, {"D", r.constant_d},
          {"holds", r.holds}};
}

Json to_json(const ApproximationReport& r) {
  return {{"consistent", {{"pairs", to_json(r.consistent.pairs)},
                          {"nu", to_json(r.consistent.nu)},
                          {"shift_scale", r.consistent.shift_scale}}},
          {"omega_n", to_json(r.omega_n)},
          {"varpi_n", to_json(r.varpi_n)},
          {"quantized", to_json(r.quantized)},
          {"capped", to_json(r.capped)},
          {"tv_consistify", r.tv_consistify},
          {"tv_quantized", r.tv_quantized},
          {"tv_capped", r.tv_capped}};
}

Json to_json(const EmpiricalMeasures& em) {
  return {{"edge_count", em.edge_count},
          {"L1", to_json(em.colors)},
          {"L2", to_json(em.pairs)},
          {"M", to_json(em.neighborhoods)}};
}

// Count objects {"n", "counts"} are accepted wherever a measure is expected.
static bool is_counts(const Json& j) { return j.is_object() && j.contains("counts") && !j.contains("weights"); }

ColorMeasure color_measure_from(const Json& j) {
  if (is_counts(j)) return color_counts_from(j).measure();
  const Json& w = j.is_array() ? j : field(j, "weights", "colour measure");
  ColorMeasure mu(reals_from(w, "colour measure weights"));
  check_m(j, mu.m(), "colour measure");
  return mu;
}

PairMeasure pair_measure_from(const Json& j) {
  if (is_counts(j)) return pair_counts_from(j).measure();
  const Json& w = j.is_array() ? j : field(j, "weights", "pair measure");
  std::size_t m = 0;
  auto rows = rows_from(w, m, "pair measure weights");
  PairMeasure varpi(m, std::move(rows));
  check_m(j, m, "pair measure");
  return varpi;
}

NeighborhoodMeasure neighborhood_measure_from(const Json& j) {
  if (is_counts(j)) return neighborhood_counts_from(j).measure();
  const std::uint64_t m = count_from(field(j, "m", "neighbourhood measure"), "neighbourhood measure m");
  if (m == 0) throw ShapeError("neighbourhood measure: m must be >= 1");
  NeighborhoodMeasure nu(m);
  const Json& atoms = field(j, "weights", "neighbourhood measure");
  if (!atoms.is_array()) throw ParseError("neighbourhood measure weights: expected an array");
  for (const auto& a : atoms) {
    const std::uint64_t color = count_from(field(a, "color", "atom"), "atom color");
    auto ell = counts_from(field(a, "ell", "atom"), "atom ell");
    const double mass = real_from(field(a, "mass", "atom"), "atom mass");
    if (color >= m || ell.size() != m) throw ShapeError("neighbourhood measure: atom outside the alphabet");
    if (!(mass >= 0.0) || !std::isfinite(mass)) throw DomainError("neighbourhood measure: negative mass");
    nu.add(Atom{color, DegreeVector(std::move(ell))}, mass);
  }
  return nu;
}

DegreeDistribution degree_distribution_from(const Json& j) {
  DegreeDistribution d;
  const Json& pmf = j.is_array() ? j : field(j, "pmf", "degree distribution");
  d.pmf = reals_from(pmf, "degree distribution pmf");
  if (j.is_object() && j.contains("infinite_mean")) d.infinite_mean = j["infinite_mean"].get<bool>();
  return d;
}

ColorCounts color_counts_from(const Json& j) {
  ColorCounts c{count_from(field(j, "n", "colour counts"), "n"),
                counts_from(field(j, "counts", "colour counts"), "colour counts")};
  c.validate();
  return c;
}

PairCounts pair_counts_from(const Json& j) {
  const std::uint64_t n = count_from(field(j, "n", "pair counts"), "n");
  const Json& rows = field(j, "counts", "pair counts");
  if (!rows.is_array() || rows.empty()) throw ParseError("pair counts: expected rows");
  PairCounts c = PairCounts::zero(n, rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    auto row = counts_from(rows[a], "pair counts row");
    if (row.size() != rows.size()) throw ShapeError("pair counts: matrix is not square");
    for (std::size_t b = 0; b < row.size(); ++b) c.at(a, b) = row[b];
  }
  check_m(j, c.m, "pair counts");
  c.validate();
  return c;
}

NeighborhoodCounts neighborhood_counts_from(const Json& j) {
  NeighborhoodCounts c;
  c.n = count_from(field(j, "n", "neighbourhood counts"), "n");
  c.m = count_from(field(j, "m", "neighbourhood counts"), "m");
  const Json& atoms = field(j, "counts", "neighbourhood counts");
  if (!atoms.is_array()) throw ParseError("neighbourhood counts: expected an array");
  for (const auto& a : atoms) {
    const std::uint64_t color = count_from(field(a, "color", "atom"), "atom color");
    auto ell = counts_from(field(a, "ell", "atom"), "atom ell");
    if (color >= c.m || ell.size() != c.m) throw ShapeError("neighbourhood counts: atom outside the alphabet");
    c.atoms[Atom{color, DegreeVector(std::move(ell))}] += count_from(field(a, "count", "atom"), "atom count");
  }
  c.validate();
  return c;
}

Kernel kernel_from(const Json& rows) {
  std::size_t m = 0;
  auto v = rows_from(rows, m, "kernel C");
  return Kernel(m, std::move(v));
}

Model model_from(const Json& j) {
  const Json& mu = field(j, "mu", "model");
  const Json& c = field(j, "C", "model");
  Model model{ColorMeasure(reals_from(mu, "model mu")), kernel_from(c)};
  if (j.contains("m") && count_from(j["m"], "model m") != model.mu.m())
    throw ShapeError("model: \"m\" disagrees with mu");
  if (model.mu.m() != model.kernel.m()) throw ShapeError("model: mu and C have different sizes");
  model.mu.require_probability("model mu");
  return model;
}

Json to_json(const Model& model) {
  Json rows = Json::array();
  const std::size_t m = model.kernel.m();
  for (std::size_t a = 0; a < m; ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < m; ++b) row.push_back(model.kernel(a, b));
    rows.push_back(row);
  }
  Json mu = Json::array();
  for (double x : model.mu.weights()) mu.push_back(x);
  return {{"m", m}, {"mu", mu}, {"C", rows}};
}

}  // namespace ldg::io
