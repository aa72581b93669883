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

#include "ldg/varsolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ldg/errors.hpp"
#include "optimize.hpp"

namespace ldg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Radical inverse in base b (Halton sequence coordinate).
double radical_inverse(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

struct Restricted {
  std::vector<std::size_t> support;  // indices with mu > 0
  std::vector<double> mu;
  std::vector<double> kernel;  // |S| x |S|
};

Restricted restrict_to_support(const ColorMeasure& mu, const Kernel& kernel) {
  if (mu.m() != kernel.m()) throw ShapeError("colour law and kernel over different alphabets");
  mu.require_probability("colour law");
  Restricted r;
  for (std::size_t a = 0; a < mu.m(); ++a) {
    if (mu[a] > 0.0) {
      r.support.push_back(a);
      r.mu.push_back(mu[a]);
    }
  }
  const std::size_t d = r.support.size();
  r.kernel.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) r.kernel[i * d + j] = kernel(r.support[i], r.support[j]);
  return r;
}

double quadratic(const std::vector<double>& k, const std::vector<double>& w) {
  const std::size_t d = w.size();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += k[i * d + j] * w[i] * w[j];
  return s;
}

std::vector<double> expand(const Restricted& r, std::size_t m, const std::vector<double>& w) {
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < r.support.size(); ++i) out[r.support[i]] = w[i];
  return out;
}

QuadraticRange range_restricted(const Restricted& r) {
  const std::size_t d = r.support.size();
  if (d > 20) throw ResourceError("attainable range: support larger than 20 colours");
  QuadraticRange out{kInf, -kInf, {}, {}};
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1) idx.push_back(i);
    const std::size_t s = idx.size();
    std::vector<double> w(d, 0.0);
    if (s == 1) {
      w[idx[0]] = 1.0;
    } else {
      // Stationary point of w^T K w on the face's affine hull.
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s + 1), static_cast<Eigen::Index>(s + 1));
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s + 1));
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) kkt(i, j) = 2.0 * r.kernel[idx[i] * d + idx[j]];
        kkt(i, s) = -1.0;
        kkt(s, i) = 1.0;
      }
      rhs(static_cast<Eigen::Index>(s)) = 1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd sol = lu.solve(rhs);
      bool inside = true;
      for (std::size_t i = 0; i < s; ++i) {
        if (sol(static_cast<Eigen::Index>(i)) < -1e-12) inside = false;
        w[idx[i]] = std::max(0.0, sol(static_cast<Eigen::Index>(i)));
      }
      if (!inside) continue;
      double total = 0.0;
      for (double x : w) total += x;
      for (double& x : w) x /= total;
    }
    const double q = quadratic(r.kernel, w);
    if (q < out.min) {
      out.min = q;
      out.argmin = w;
    }
    if (q > out.max) {
      out.max = q;
      out.argmax = w;
    }
  }
  return out;
}

double restricted_entropy(const std::vector<double>& w, const std::vector<double>& mu) {
  double h = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) h += w[i] > 0.0 ? w[i] * std::log(w[i] / mu[i]) : 0.0;
  return h;
}

void softmax(const std::vector<double>& theta, std::vector<double>& w) {
  const double top = *std::max_element(theta.begin(), theta.end());
  double total = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) total += (w[i] = std::exp(theta[i] - top));
  for (double& x : w) x /= total;
}

}  // namespace

SolveReport solve_degree_fixed_point(double mean, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("degree fixed point: c must be positive");
  if (!(mean >= 0.0)) throw DomainError("degree fixed point: mean must be nonnegative");
  if (mean > c) throw DomainError("degree fixed point: mean exceeds c, use the x = <d> branch");
  auto f = [&](double x) { return x - c * std::exp(-2.0 * (1.0 - mean / x)); };
  double lo = std::max(mean, c * std::exp(-2.0));
  double hi = c;
  int it = 0;
  if (f(lo) >= 0.0) {
    hi = lo;
  } else {
    while (it < 400) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) < 0.0 ? lo : hi) = mid;
      ++it;
    }
  }
  // Pick the endpoint with the smaller residual.
  const double x = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  SolveReport out;
  out.argument = {x};
  out.value = x;
  out.residual = std::abs(f(x));
  out.iterations = it;
  out.converged = out.residual <= 1e-12 * std::max(1.0, c);
  return out;
}

QuadraticRange attainable_range(const ColorMeasure& mu, const Kernel& kernel) {
  const Restricted r = restrict_to_support(mu, kernel);
  QuadraticRange range = range_restricted(r);
  range.argmin = expand(r, mu.m(), range.argmin);
  range.argmax = expand(r, mu.m(), range.argmax);
  return range;
}

SolveReport psi(double y, const ColorMeasure& mu, const Kernel& kernel, const PsiOptions& options) {
  const Restricted r = restrict_to_support(mu, kernel);
  const std::size_t d = r.support.size();
  const QuadraticRange range = range_restricted(r);
  const double scale = std::max({1.0, std::abs(range.min), std::abs(range.max)});
  const double range_tol = 1e-12 * scale;

  SolveReport out;
  out.converged = true;
  if (!(y >= range.min - range_tol && y <= range.max + range_tol)) {
    out.value = kInf;
    out.residual = y < range.min ? range.min - y : y - range.max;
    return out;
  }
  if (range.max - range.min <= range_tol) {
    // Every w gives the same quadratic form, so w = mu is feasible and optimal.
    out.value = 0.0;
    out.argument = expand(r, mu.m(), r.mu);
    return out;
  }

  double best_value = kInf;
  std::vector<double> best_w;
  double best_violation = kInf;
  int total_iterations = 0;
  std::vector<double> w(d), grad_w(d), kw(d);

  auto consider = [&](const std::vector<double>& cand) {
    const double violation = std::abs(quadratic(r.kernel, cand) - y);
    const double h = restricted_entropy(cand, r.mu);
    const bool feasible = violation <= options.constraint_tol;
    const bool best_feasible = best_violation <= options.constraint_tol;
    if ((feasible && (!best_feasible || h < best_value)) || (!feasible && !best_feasible && violation < best_violation)) {
      best_value = h;
      best_w = cand;
      best_violation = violation;
    }
  };
  if (std::abs(y - range.max) <= 1e-9 * scale) consider(range.argmax);
  if (std::abs(y - range.min) <= 1e-9 * scale) consider(range.argmin);

  for (int start = 0; start < options.starts; ++start) {
    std::vector<double> w0(d);
    if (start == 0) {
      w0 = r.mu;
    } else {
      double total = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double u = radical_inverse(static_cast<unsigned>(start), kPrimes[i % 20]);
        total += (w0[i] = -std::log(std::max(u, 1e-6)));
      }
      for (double& x : w0) x /= total;
    }
    std::vector<double> theta(d);
    for (std::size_t i = 0; i < d; ++i) theta[i] = std::log(std::max(w0[i], 1e-300));

    double lambda = 0.0, rho = 1e2, prev = kInf;
    auto lagrangian = [&](const std::vector<double>& th, std::vector<double>& g) {
      softmax(th, w);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += r.kernel[i * d + j] * w[j];
        kw[i] = acc;
      }
      double q = 0.0;
      for (std::size_t i = 0; i < d; ++i) q += w[i] * kw[i];
      const double cons = q - y;
      const double mult = lambda + rho * cons;
      double mean = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        grad_w[i] = (w[i] > 0.0 ? std::log(w[i] / r.mu[i]) : -745.0) + 2.0 * mult * kw[i];
        mean += w[i] * grad_w[i];
      }
      for (std::size_t i = 0; i < d; ++i) g[i] = w[i] * (grad_w[i] - mean);
      return restricted_entropy(w, r.mu) + lambda * cons + 0.5 * rho * cons * cons;
    };
    for (int outer = 0; outer < 60; ++outer) {
      auto res = detail::bfgs(lagrangian, theta, 1e-10, 500);
      total_iterations += res.iterations;
      theta = res.x;
      softmax(theta, w);
      const double cons = quadratic(r.kernel, w) - y;
      if (std::abs(cons) <= 1e-11 * scale && res.converged) break;
      lambda += rho * cons;
      if (std::abs(cons) > 0.25 * prev) rho = std::min(rho * 10.0, 1e8);
      prev = std::abs(cons);
    }
    softmax(theta, w);
    consider(w);
  }

  out.argument = expand(r, mu.m(), best_w);
  out.value = best_violation <= options.constraint_tol ? std::max(0.0, best_value) : kInf;
  out.residual = best_violation;
  out.iterations = total_iterations;
  out.converged = best_violation <= options.constraint_tol;
  return out;
}

SolveReport zeta_inner(double x, const ColorMeasure& mu, const Kernel& kernel, const PsiOptions& options) {
  if (!(x >= 0.0)) throw DomainError("zeta: x must be nonnegative");
  const QuadraticRange range = attainable_range(mu, kernel);
  const double scale = std::max({1.0, std::abs(range.min), std::abs(range.max)});

  bool all_converged = true;
  auto objective = [&](double y) {
    if (!(y > 0.0)) return kInf;
    const SolveReport p = psi(y, mu, kernel, options);
    all_converged = all_converged && p.converged;
    return p.value - (x > 0.0 ? x * std::log(0.5 * y) : 0.0) + 0.5 * y;
  };

  SolveReport out;
  if (range.max <= 0.0) {  // no edges are possible under mu
    out.value = kInf;
    out.argument = {0.0};
    out.converged = true;
    return out;
  }
  if (range.max - range.min <= 1e-12 * scale) {
    out.argument = {range.max};
    out.value = objective(range.max);
    out.converged = all_converged;
    return out;
  }
  const double lo = std::max(range.min, 1e-12 * scale);
  const auto best = detail::scan_then_golden(objective, lo, range.max, 33, 1e-10);
  out.argument = {best.x};
  out.value = best.f;
  out.residual = best.width;
  out.iterations = best.iterations;
  out.converged = all_converged && best.width <= 1e-10 * scale;
  return out;
}

double ising_objective(double beta, double c, std::span<const double> point) {
  const double x = point[0];
  const double wpp = point[1], wmm = point[2], wpm = point[3];
  if (x < 0.0 || x > 1.0 || wpp < 0.0 || wmm < 0.0 || wpm < 0.0) return -kInf;
  // omega_x(i, j) = c x^{(2+i+j)/2} (1-x)^{(2-i-j)/2}
  const double opp = c * x * x;
  const double omm = c * (1.0 - x) * (1.0 - x);
  const double opm = c * x * (1.0 - x);
  auto term = [](double w, double o) {
    if (w == 0.0) return 0.0;
    if (o == 0.0) return kInf;
    return w * std::log(w / o);
  };
  const double rel = term(wpp, opp) + term(wmm, omm) + 2.0 * term(wpm, opm);
  if (!std::isfinite(rel)) return -kInf;
  const double mass = wpp + wmm + 2.0 * wpm;
  return 0.5 * beta * (wpp + wmm - 2.0 * wpm) - xlogx(x) - xlogx(1.0 - x) - 0.5 * (rel + c - mass);
}

SolveReport ising_annealed(double beta, double c, const IsingOptions& options) {
  if (!(c > 0.0)) throw DomainError("ising: c must be positive");
  if (!(beta >= 0.0)) throw DomainError("ising: beta must be nonnegative");
  const int g = std::max(options.grid, 2);
  const double wmax = 2.0 * c * std::exp(beta);
  const double hx = 1.0 / (g - 1);
  const double hw = wmax / (g - 1);

  // Coarse grid.
  std::vector<double> best{0.5, 0.25 * c, 0.25 * c, 0.25 * c};
  double fbest = ising_objective(beta, c, best);
  std::vector<double> pt(4);
  for (int i = 0; i < g; ++i) {
    pt[0] = i * hx;
    for (int j = 0; j < g; ++j) {
      pt[1] = j * hw;
      for (int k = 0; k < g; ++k) {
        pt[2] = k * hw;
        for (int l = 0; l < g; ++l) {
          pt[3] = l * hw;
          const double f = ising_objective(beta, c, pt);
          if (f > fbest) {
            fbest = f;
            best = pt;
          }
        }
      }
    }
  }

  // Nelder-Mead refinement, restarted until the objective stops moving.
  auto neg = [&](const std::vector<double>& p) {
    if (p[0] < 0.0 || p[0] > 1.0 || p[1] > wmax * 4 || p[2] > wmax * 4 || p[3] > wmax * 4) return kInf;
    return -ising_objective(beta, c, p);
  };
  std::vector<double> step{0.5 * hx, 0.5 * hw, 0.5 * hw, 0.5 * hw};
  SolveReport out;
  double last = -fbest;
  int iterations = 0;
  for (int restart = 0; restart < 40; ++restart) {
    for (std::size_t k = 0; k < 4; ++k) {
      // Step into the box from boundary points.
      if (best[k] + step[k] > (k == 0 ? 1.0 : wmax * 4)) step[k] = -std::abs(step[k]);
      else step[k] = std::abs(step[k]);
    }
    auto res = detail::nelder_mead(neg, best, step, 1e-15, 1e-11, 20000);
    iterations += res.iterations;
    const double improvement = last - res.f;
    if (res.f <= last) {
      best = res.x;
      last = res.f;
    }
    out.residual = std::abs(improvement);
    if (restart > 0 && std::abs(improvement) <= options.tolerance * 1e-2) {
      out.converged = true;
      break;
    }
    for (double& s : step) s = std::max(std::abs(s) * 0.1, 1e-6);
  }
  out.argument = best;
  out.value = -last;
  out.iterations = iterations;
  return out;
}

double legendre_i_omega(const PairMeasure& varpi, const ColorMeasure& omega, const Kernel& kernel,
                        const LegendreOptions& options) {
  const std::size_t m = varpi.m();
  if (omega.m() != m || kernel.m() != m) throw ShapeError("legendre dual: alphabet mismatch");
  const PairMeasure base = product_kernel_measure(kernel, omega);
  for (std::size_t i = 0; i < m * m; ++i) {
    if (varpi.weights()[i] > 0.0 && base.weights()[i] == 0.0) return kInf;
  }
  std::vector<double> g(m * m, 0.0);
  auto objective = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < m * m; ++i) s += varpi.weights()[i] * g[i] + base.weights()[i] * (1.0 - std::exp(g[i]));
    return s;
  };
  double value = objective();
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        // Coordinate {a, b}: maximise (w_ab + w_ba) g + (K_ab + K_ba)(1 - e^g).
        const double w = varpi(a, b) + varpi(b, a);
        const double k = base(a, b) + base(b, a);
        double gab = 0.0;
        if (k > 0.0) gab = w > 0.0 ? std::log(w / k) : -options.box;
        gab = std::clamp(gab, -options.box, options.box);
        g[a * m + b] = gab;
        g[b * m + a] = gab;
      }
    }
    const double next = objective();
    const bool done = next - value <= options.tolerance * (1.0 + std::abs(next));
    value = std::max(value, next);
    if (done) break;
  }
  return 0.5 * value;
}

}  // namespace ldg
