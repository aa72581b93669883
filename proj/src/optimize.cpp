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

#include "optimize.hpp"

#include <numeric>

namespace ldg::detail {

namespace {

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

MinimizeResult bfgs(const ObjectiveWithGradient& f, Vec x, double gtol, int max_iter) {
  const std::size_t d = x.size();
  Vec g(d), g_new(d), x_new(d), dir(d), s(d), y(d), hy(d);
  double fx = f(x, g);
  std::vector<double> h(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) h[i * d + i] = 1.0;

  MinimizeResult out;
  int it = 0;
  for (; it < max_iter; ++it) {
    if (!std::isfinite(fx)) break;
    if (max_abs(g) <= gtol) {
      out.converged = true;
      break;
    }
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc -= h[i * d + j] * g[j];
      dir[i] = acc;
    }
    double slope = dot(dir, g);
    if (!(slope < 0.0)) {  // lost descent: reset to steepest descent
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) {
        h[i * d + i] = 1.0;
        dir[i] = -g[i];
      }
      slope = dot(dir, g);
    }
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < d; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = max_abs(g) <= std::sqrt(gtol);
      break;
    }
    for (std::size_t i = 0; i < d; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    const double improvement = fx - f_new;
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (sy > 1e-300) {
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += h[i * d + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          h[i * d + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
      }
    }
    if (improvement <= 1e-16 * (1.0 + std::abs(fx)) && max_abs(s) <= 1e-15) {
      out.converged = max_abs(g) <= std::sqrt(gtol);
      ++it;
      break;
    }
  }
  out.x = std::move(x);
  out.f = fx;
  out.iterations = it;
  return out;
}

MinimizeResult nelder_mead(const std::function<double(const Vec&)>& f, Vec x0, const Vec& step,
                           double ftol, double xtol, int max_iter) {
  const std::size_t d = x0.size();
  std::vector<Vec> simplex(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += step[i];
  Vec fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(d + 1);
  MinimizeResult out;
  int it = 0;
  Vec centroid(d), trial(d), trial2(d);
  for (; it < max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];

    double size = 0.0;
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t k = 0; k < d; ++k) size = std::max(size, std::abs(simplex[i][k] - simplex[best][k]));
    if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= ftol * (1.0 + std::abs(fv[best])) && size <= xtol) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);
    }
    for (std::size_t k = 0; k < d; ++k) trial[k] = centroid[k] + (centroid[k] - simplex[worst][k]);
    const double fr = f(trial);
    if (fr < fv[best]) {
      for (std::size_t k = 0; k < d; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - simplex[worst][k]);
      const double fe = f(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        fv[worst] = fe;
      } else {
        simplex[worst] = trial;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = trial;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    for (std::size_t k = 0; k < d; ++k) {
      trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                          : centroid[k] + 0.5 * (simplex[worst][k] - centroid[k]);
    }
    const double fc = f(trial2);
    if (fc < std::min(fr, fv[worst])) {
      simplex[worst] = trial2;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {  // shrink toward the best vertex
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k) simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      fv[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  out.x = simplex[best];
  out.f = fv[best];
  out.iterations = it;
  return out;
}

Minimum1D golden_section(const std::function<double(double)>& f, double lo, double hi, double xtol,
                         int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (b - a > xtol && it < max_iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++it;
  }
  Minimum1D out;
  if (fc <= fd) {
    out.x = c;
    out.f = fc;
  } else {
    out.x = d;
    out.f = fd;
  }
  // Endpoints can beat the interior probes when the minimum sits on the boundary.
  for (double e : {lo, hi}) {
    if (std::abs(out.x - e) <= 2 * (b - a) + xtol) {
      const double fe = f(e);
      if (fe < out.f) {
        out.x = e;
        out.f = fe;
      }
    }
  }
  out.width = b - a;
  out.iterations = it;
  return out;
}

Minimum1D scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int points,
                           double xtol) {
  if (hi <= lo) return {lo, f(lo), 0.0, 0};
  const int k = std::max(points, 3);
  const double h = (hi - lo) / (k - 1);
  int best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const double fi = f(lo + i * h);
    if (fi < fbest) {
      fbest = fi;
      best = i;
    }
  }
  const double a = lo + std::max(0, best - 1) * h;
  const double b = lo + std::min(k - 1, best + 1) * h;
  Minimum1D refined = golden_section(f, a, b, xtol);
  if (fbest < refined.f) {
    refined.x = lo + best * h;
    refined.f = fbest;
  }
  refined.iterations += k;
  return refined;
}

}  // namespace ldg::detail
