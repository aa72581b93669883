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

#include "ldg/graphs.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "ldg/errors.hpp"

namespace ldg {

void ColoredGraph::validate() const {
  Alphabet{m};
  if (colors.empty()) throw DomainError("graph needs at least one vertex");
  if (colors.size() > std::numeric_limits<Vertex>::max()) throw ResourceError("graph too large");
  for (std::size_t c : colors) {
    if (c >= m) throw DomainError("vertex colour out of range");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (u >= v) throw DomainError("edges must be stored as (u, v) with u < v");
    if (v >= colors.size()) throw DomainError("edge endpoint out of range");
    if (i > 0 && !(edges[i - 1] < edges[i])) throw DomainError("edges must be sorted and distinct");
  }
}

ModelParams::ModelParams(ColorMeasure mu_, Kernel kernel_, std::uint64_t n_)
    : mu(std::move(mu_)), kernel(std::move(kernel_)), n(n_) {
  if (mu.m() != kernel.m()) throw ShapeError("colour law and kernel over different alphabets");
  mu.require_probability("colour law");
  if (n == 0) throw DomainError("model needs n >= 1");
}

double ModelParams::p(std::size_t a, std::size_t b) const {
  return std::min(kernel(a, b) / static_cast<double>(n), 1.0);
}

EdgeProbabilities EdgeProbabilities::from_kernel(const Kernel& kernel, std::uint64_t n) {
  const std::size_t m = kernel.m();
  EdgeProbabilities out{m, std::vector<double>(m * m)};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      out.p[a * m + b] = std::min(kernel(a, b) / static_cast<double>(n), 1.0);
  return out;
}

EdgeProbabilities EdgeProbabilities::from_model(const ModelParams& params) {
  return from_kernel(params.kernel, params.n);
}

std::vector<std::vector<Vertex>> group_by_color(const std::vector<std::size_t>& colors, std::size_t m) {
  std::vector<std::vector<Vertex>> by_color(m);
  for (std::size_t v = 0; v < colors.size(); ++v) by_color[colors[v]].push_back(static_cast<Vertex>(v));
  return by_color;
}

std::pair<std::uint64_t, std::uint64_t> decode_triangle_slot(std::uint64_t s, std::uint64_t k) {
  // Rows i hold k-1-i slots; row i starts at i(2k-i-1)/2.
  auto row_start = [k](std::uint64_t i) { return i * (2 * k - i - 1) / 2; };
  const double kd = static_cast<double>(k);
  const double disc = (2 * kd - 1) * (2 * kd - 1) - 8.0 * static_cast<double>(s);
  auto i = static_cast<std::uint64_t>(std::max(0.0, std::floor(((2 * kd - 1) - std::sqrt(std::max(0.0, disc))) / 2)));
  if (i > k - 2) i = k - 2;
  while (i > 0 && row_start(i) > s) --i;
  while (i + 1 <= k - 2 && row_start(i + 1) <= s) ++i;
  return {i, i + 1 + (s - row_start(i))};
}

void sample_colors(const ColorMeasure& mu, std::uint64_t n, Rng& rng, std::vector<std::size_t>& colors) {
  colors.assign(n, 0);
  const std::size_t m = mu.m();
  if (m == 1) return;
  std::vector<double> cumulative(m);
  double acc = 0.0;
  for (std::size_t a = 0; a < m; ++a) cumulative[a] = (acc += mu[a]);
  for (auto& c : colors) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t a = static_cast<std::size_t>(it - cumulative.begin());
    if (a >= m) a = m - 1;
    while (mu[a] == 0.0 && a > 0) --a;  // u landed exactly on a boundary
    c = a;
  }
}

ColoredGraph sample_colored_graph(const ModelParams& params, std::uint64_t seed) {
  if (params.n > std::numeric_limits<Vertex>::max()) throw ResourceError("graph too large");
  Rng rng(seed);
  ColoredGraph g;
  g.m = params.mu.m();
  sample_colors(params.mu, params.n, rng, g.colors);
  const auto by_color = group_by_color(g.colors, g.m);
  const auto probs = EdgeProbabilities::from_model(params);
  stream_block_edges(by_color, probs, rng, [&](std::size_t, std::size_t, Vertex u, Vertex v) {
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  });
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<std::uint64_t> degrees(const ColoredGraph& graph) {
  std::vector<std::uint64_t> deg(graph.n(), 0);
  for (const auto& [u, v] : graph.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

EmpiricalMeasures empirical_measures(const ColoredGraph& graph) {
  graph.validate();
  const std::size_t m = graph.m;
  const std::uint64_t n = graph.n();
  EmpiricalMeasures out{ColorCounts{n, std::vector<std::uint64_t>(m, 0)}, PairCounts::zero(n, m),
                        NeighborhoodCounts{n, m, {}}, graph.edge_count()};
  for (std::size_t c : graph.colors) ++out.colors.counts[c];

  std::vector<DegreeVector> ell(n, DegreeVector::zero(m));
  for (const auto& [u, v] : graph.edges) {
    const std::size_t cu = graph.colors[u];
    const std::size_t cv = graph.colors[v];
    out.pairs.at(cu, cv) += 1;
    out.pairs.at(cv, cu) += 1;
    ell[u].counts[cv] += 1;
    ell[v].counts[cu] += 1;
  }
  for (std::size_t v = 0; v < n; ++v) out.neighborhoods.atoms[Atom{graph.colors[v], std::move(ell[v])}] += 1;
  return out;
}

std::uint64_t block_slots(std::uint64_t ka, std::uint64_t kb, bool same_color) {
  return same_color ? (ka < 2 ? 0 : ka * (ka - 1) / 2) : ka * kb;
}

ColoredGraph sample_conditional(const ColorCounts& omega_n, const PairCounts& varpi_n,
                                std::uint64_t seed, int max_retries) {
  omega_n.validate();
  varpi_n.validate();
  const std::size_t m = omega_n.counts.size();
  if (varpi_n.m != m || varpi_n.n != omega_n.n) {
    throw ShapeError("conditional sampler: colour and pair counts disagree on (n, m)");
  }
  if (omega_n.n > std::numeric_limits<Vertex>::max()) throw ResourceError("graph too large");
  if (max_retries < 1) throw DomainError("conditional sampler: max_retries must be >= 1");
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t slots = block_slots(omega_n.counts[a], omega_n.counts[b], a == b);
      if (varpi_n.edges(a, b) > slots) {
        throw InfeasibleError("conditional sampler: " + std::to_string(varpi_n.edges(a, b)) +
                              " edges requested between colours " + std::to_string(a) + " and " +
                              std::to_string(b) + " but only " + std::to_string(slots) +
                              " slots exist");
      }
    }
  }

  Rng rng(seed);
  ColoredGraph g;
  g.m = m;
  g.colors.reserve(omega_n.n);
  for (std::size_t a = 0; a < m; ++a) g.colors.insert(g.colors.end(), omega_n.counts[a], a);
  for (std::size_t i = g.colors.size(); i > 1; --i) {
    std::swap(g.colors[i - 1], g.colors[rng.below(i)]);
  }
  const auto by_color = group_by_color(g.colors, m);

  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> slots_drawn;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const std::uint64_t k = varpi_n.edges(a, b);
      if (k == 0) continue;
      const std::uint64_t ka = by_color[a].size();
      const std::uint64_t kb = by_color[b].size();
      const std::uint64_t total = block_slots(ka, kb, a == b);
      // Floyd's algorithm: k distinct slots out of `total`.
      chosen.clear();
      for (std::uint64_t j = total - k; j < total; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
      }
      slots_drawn.assign(chosen.begin(), chosen.end());
      std::sort(slots_drawn.begin(), slots_drawn.end());
      for (std::uint64_t s : slots_drawn) {
        Vertex u, v;
        if (a == b) {
          const auto [i, j] = decode_triangle_slot(s, ka);
          u = by_color[a][i];
          v = by_color[a][j];
        } else {
          u = by_color[a][s / kb];
          v = by_color[b][s % kb];
        }
        g.edges.emplace_back(std::min(u, v), std::max(u, v));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string to_edge_list(const ColoredGraph& graph) {
  std::ostringstream os;
  os << graph.n() << ' ' << graph.m << '\n';
  for (std::size_t v = 0; v < graph.n(); ++v) os << (v ? " " : "") << graph.colors[v];
  os << '\n';
  for (const auto& [u, v] : graph.edges) os << u << ' ' << v << '\n';
  return os.str();
}

namespace {

std::vector<std::uint64_t> parse_uints(std::string_view line, std::size_t lineno) {
  std::vector<std::uint64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::uint64_t x = 0;
    auto [next, ec] = std::from_chars(p, end, x);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError("edge list line " + std::to_string(lineno) + ": expected nonnegative integers");
    }
    out.push_back(x);
    p = next;
  }
  return out;
}

}  // namespace

ColoredGraph parse_edge_list(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    lines.emplace_back(lineno, line);
  }
  if (lines.size() < 2) throw ParseError("edge list: expected a header line and a colour line");
  const auto header = parse_uints(lines[0].second, lines[0].first);
  if (header.size() != 2) throw ParseError("edge list line " + std::to_string(lines[0].first) + ": header must be 'n m'");
  ColoredGraph g;
  g.m = header[1];
  const auto colors = parse_uints(lines[1].second, lines[1].first);
  if (colors.size() != header[0]) {
    throw ParseError("edge list line " + std::to_string(lines[1].first) + ": expected " +
                     std::to_string(header[0]) + " colours, got " + std::to_string(colors.size()));
  }
  g.colors.assign(colors.begin(), colors.end());
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto uv = parse_uints(lines[i].second, lines[i].first);
    if (uv.size() != 2 || uv[0] == uv[1] || uv[0] >= g.colors.size() || uv[1] >= g.colors.size()) {
      throw ParseError("edge list line " + std::to_string(lines[i].first) + ": bad edge");
    }
    g.edges.emplace_back(static_cast<Vertex>(std::min(uv[0], uv[1])), static_cast<Vertex>(std::max(uv[0], uv[1])));
  }
  std::sort(g.edges.begin(), g.edges.end());
  if (std::adjacent_find(g.edges.begin(), g.edges.end()) != g.edges.end()) {
    throw ParseError("edge list: duplicate edge");
  }
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("edge list: ") + e.what());
  }
  return g;
}

}  // namespace ldg
