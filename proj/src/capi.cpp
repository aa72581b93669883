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

#include "ldg/ldg.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "ldg/errors.hpp"
#include "ldg/graphs.hpp"
#include "ldg/mcharness.hpp"
#include "ldg/oracles.hpp"
#include "ldg/rates.hpp"
#include "ldg/serialize.hpp"
#include "ldg/validate.hpp"
#include "ldg/varsolve.hpp"

struct ldg_model {
  ldg::io::Model model;
};

struct ldg_graph {
  ldg::ColoredGraph graph;
};

namespace {

using ldg::io::Json;

thread_local std::string g_last_error;

ldg_status fail(ldg_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs f, translating exceptions into status codes.
template <class F>
ldg_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const ldg::InfeasibleError& e) {
    return fail(LDG_ERR_INFEASIBLE, e.what());
  } catch (const ldg::SolverError& e) {
    return fail(LDG_ERR_NOT_CONVERGED, e.what());
  } catch (const ldg::ResourceError& e) {
    return fail(LDG_ERR_RESOURCE, e.what());
  } catch (const ldg::Error& e) {
    return fail(LDG_ERR_INVALID, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(LDG_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LDG_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(LDG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LDG_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ldg_status emit(const Json& j, char** out, ldg_status status = LDG_OK) {
  *out = copy_string(j.dump(2) + "\n");
  return status;
}

Json parse_request(const char* text) {
  if (!text) throw ldg::ParseError("request is null");
  return ldg::io::parse_json(text, "request");
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ldg::ParseError(std::string("request: missing key \"") + key + "\"");
  return j.at(key);
}

ldg::Kernel kernel_of(const Json& req) {
  if (req.contains("C")) return ldg::io::kernel_from(req["C"]);
  return ldg::io::model_from(need(req, "model")).kernel;
}

bool constant_kernel(const ldg::Kernel& k, double& c) {
  c = k(0, 0);
  for (double v : k.values())
    if (v != c) return false;
  return true;
}

ldg::TailEvent event_from(const Json& j) {
  ldg::TailEvent e;
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "edges_at_least") e.kind = ldg::EventKind::EdgesAtLeast;
  else if (kind == "edges_below") e.kind = ldg::EventKind::EdgesBelow;
  else if (kind == "isolated_at_least") e.kind = ldg::EventKind::IsolatedAtLeast;
  else if (kind == "pair_at_least") e.kind = ldg::EventKind::PairAtLeast;
  else throw ldg::ParseError("event: unknown kind \"" + kind + "\"");
  e.threshold = ldg::io::real_from(need(j, "threshold"), "event threshold");
  if (j.contains("a")) e.a = j["a"].get<std::size_t>();
  if (j.contains("b")) e.b = j["b"].get<std::size_t>();
  return e;
}

}  // namespace

extern "C" {

const char* ldg_version(void) { return "1.0.0"; }

const char* ldg_last_error(void) { return g_last_error.c_str(); }

void ldg_string_free(char* s) { std::free(s); }

ldg_status ldg_model_from_json(const char* json, ldg_model** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    auto model = ldg::io::model_from(parse_request(json));
    *out = new ldg_model{std::move(model)};
    return LDG_OK;
  });
}

void ldg_model_free(ldg_model* model) { delete model; }

ldg_status ldg_graph_sample(const ldg_model* model, uint64_t n, uint64_t seed, ldg_graph** out) {
  if (!out || !model) return fail(LDG_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    ldg::ModelParams params(model->model.mu, model->model.kernel, n);
    *out = new ldg_graph{ldg::sample_colored_graph(params, seed)};
    return LDG_OK;
  });
}

ldg_status ldg_graph_sample_conditional(const char* targets_json, uint64_t seed, ldg_graph** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(targets_json);
    const auto omega = ldg::io::color_counts_from(need(req, "omega_n"));
    const auto varpi = ldg::io::pair_counts_from(need(req, "varpi_n"));
    *out = new ldg_graph{ldg::sample_conditional(omega, varpi, seed)};
    return LDG_OK;
  });
}

ldg_status ldg_graph_parse_edge_list(const char* text, ldg_graph** out) {
  if (!out || !text) return fail(LDG_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ldg_graph{ldg::parse_edge_list(text)};
    return LDG_OK;
  });
}

ldg_status ldg_graph_to_edge_list(const ldg_graph* graph, char** out) {
  if (!out || !graph) return fail(LDG_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = copy_string(ldg::to_edge_list(graph->graph));
    return LDG_OK;
  });
}

ldg_status ldg_graph_measures_json(const ldg_graph* graph, char** out) {
  if (!out || !graph) return fail(LDG_ERR_INVALID, "null argument");
  *out = nullptr;
  return guarded([&] { return emit(ldg::io::to_json(ldg::empirical_measures(graph->graph)), out); });
}

size_t ldg_graph_vertex_count(const ldg_graph* graph) { return graph ? graph->graph.n() : 0; }

size_t ldg_graph_edge_count(const ldg_graph* graph) { return graph ? graph->graph.edge_count() : 0; }

void ldg_graph_free(ldg_graph* graph) { delete graph; }

ldg_status ldg_rate_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    namespace io = ldg::io;
    const Json req = parse_request(request);
    const std::string rate = need(req, "rate").get<std::string>();
    Json result;
    ldg_status status = LDG_OK;
    if (rate == "J") {
      const auto model = io::model_from(need(req, "model"));
      result = io::to_json(ldg::rate_J(io::pair_measure_from(need(req, "varpi")),
                                       io::neighborhood_measure_from(need(req, "nu")), model.mu, model.kernel));
    } else if (rate == "I") {
      const auto model = io::model_from(need(req, "model"));
      result = io::to_json(ldg::rate_I(io::color_measure_from(need(req, "omega")),
                                       io::pair_measure_from(need(req, "varpi")), model.mu, model.kernel));
    } else if (rate == "I_omega") {
      const double v = ldg::rate_I_omega(io::pair_measure_from(need(req, "varpi")),
                                         io::color_measure_from(need(req, "omega")), kernel_of(req));
      result = io::to_json(ldg::RateValue{v, {}, std::isfinite(v) ? "" : "not_absolutely_continuous"});
    } else if (rate == "J_tilde") {
      const double v = ldg::rate_J_tilde(io::neighborhood_measure_from(need(req, "nu")),
                                         io::color_measure_from(need(req, "omega")),
                                         io::pair_measure_from(need(req, "varpi")));
      result = io::to_json(ldg::RateValue{v, {}, std::isfinite(v) ? "" : "constraint_violated"});
    } else if (rate == "delta") {
      const double v = ldg::rate_delta(io::degree_distribution_from(need(req, "d")),
                                       io::real_from(need(req, "c"), "c"));
      result = io::to_json(ldg::RateValue{v, {}, std::isfinite(v) ? "" : "infinite_mean"});
    } else if (rate == "zeta") {
      const auto model = io::model_from(need(req, "model"));
      const double x = io::real_from(need(req, "x"), "x");
      const ldg::RateValue z = ldg::rate_zeta(x, model.mu, model.kernel);
      result = io::to_json(z);
      double c = 0.0;
      if (constant_kernel(model.kernel, c)) result["closed_form"] = ldg::rate_zeta_er(x, c);
      if (z.reason == "not_converged") status = LDG_ERR_NOT_CONVERGED;
    } else {
      throw ldg::ParseError("request: unknown rate \"" + rate + "\"");
    }
    Json tagged = {{"rate", rate}};
    tagged.update(result);
    if (status != LDG_OK) g_last_error = "solver did not converge";
    return emit(tagged, out, status);
  });
}

ldg_status ldg_degree_rate_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(request);
    const double c = ldg::io::real_from(need(req, "c"), "c");
    const auto d = ldg::io::degree_distribution_from(need(req, "d"));
    const double value = ldg::rate_delta(d, c);
    Json result = {{"c", c}, {"value", ldg::io::real(value)}};
    if (!d.infinite_mean) {
      const double mean = d.mean();
      result["mean"] = mean;
      if (mean <= c) {
        const auto fp = ldg::solve_degree_fixed_point(mean, c);
        result["branch"] = "fixed_point";
        result["x"] = fp.value;
        result["fixed_point"] = ldg::io::to_json(fp);
      } else {
        result["branch"] = "mean";
        result["x"] = mean;
      }
    } else {
      result["branch"] = "infinite_mean";
    }
    return emit(result, out);
  });
}

ldg_status ldg_edge_rate_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(request);
    const auto model = ldg::io::model_from(need(req, "model"));
    double c = 0.0;
    const bool er = constant_kernel(model.kernel, c);
    std::vector<std::uint64_t> sizes;
    if (req.contains("sizes")) {
      sizes = req["sizes"].get<std::vector<std::uint64_t>>();
      if (!er) throw ldg::DomainError("edge-rate: exact exponents need a constant kernel");
    }
    Json rows = Json::array();
    bool converged = true;
    for (const auto& xj : need(req, "x")) {
      const double x = ldg::io::real_from(xj, "x");
      const ldg::RateValue z = ldg::rate_zeta(x, model.mu, model.kernel);
      converged = converged && z.reason != "not_converged";
      Json row = {{"x", x}, {"zeta", ldg::io::real(z.value)}};
      if (er) row["closed_form"] = ldg::rate_zeta_er(x, c);
      if (!sizes.empty()) {
        Json exact = Json::array();
        std::vector<double> values;
        for (auto n : sizes) {
          values.push_back(ldg::exact_er_edge_exponent(n, c, x));
          exact.push_back({{"n", n}, {"exponent", ldg::io::real(values.back())}});
        }
        row["exact"] = exact;
        if (sizes.size() >= 2) row["extrapolated"] = ldg::fit_inverse_size(sizes, values).limit;
      }
      rows.push_back(row);
    }
    if (!converged) g_last_error = "solver did not converge";
    return emit({{"rows", rows}}, out, converged ? LDG_OK : LDG_ERR_NOT_CONVERGED);
  });
}

ldg_status ldg_ising_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(request);
    Json rows = Json::array();
    bool converged = true;
    for (const auto& bj : need(req, "beta")) {
      for (const auto& cj : need(req, "c")) {
        const double beta = ldg::io::real_from(bj, "beta");
        const double c = ldg::io::real_from(cj, "c");
        const auto s = ldg::ising_annealed(beta, c);
        const auto o = ldg::ising_oracle(beta, c);
        converged = converged && s.converged;
        rows.push_back({{"beta", beta}, {"c", c}, {"annealed", s.value}, {"oracle", o.value},
                        {"abs_diff", std::abs(s.value - o.value)}, {"argument", s.argument},
                        {"oracle_alpha", o.alpha}});
      }
    }
    if (!converged) g_last_error = "solver did not converge";
    return emit({{"rows", rows}}, out, converged ? LDG_OK : LDG_ERR_NOT_CONVERGED);
  });
}

ldg_status ldg_approximate_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(request);
    const auto varpi = ldg::io::pair_measure_from(need(req, "varpi"));
    const auto nu = ldg::io::neighborhood_measure_from(need(req, "nu"));
    const auto n = need(req, "n").get<std::uint64_t>();
    const double eps = req.contains("epsilon") ? ldg::io::real_from(req["epsilon"], "epsilon") : 0.05;
    const auto seed = req.contains("seed") ? req["seed"].get<std::uint64_t>() : 0;
    return emit(ldg::io::to_json(ldg::approximate(varpi, nu, n, eps, seed)), out);
  });
}

ldg_status ldg_tail_experiment_json(const char* request, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json req = parse_request(request);
    const auto model = ldg::io::model_from(need(req, "model"));
    ldg::TailExperiment e{.mu = model.mu,
                          .kernel = model.kernel,
                          .event = event_from(need(req, "event")),
                          .sizes = need(req, "sizes").get<std::vector<std::uint64_t>>()};
    if (req.contains("replicas")) e.replicas = req["replicas"].get<std::uint64_t>();
    if (req.contains("replicas_per_size"))
      e.replicas_per_size = req["replicas_per_size"].get<std::vector<std::uint64_t>>();
    if (req.contains("first_replica")) e.first_replica = req["first_replica"].get<std::uint64_t>();
    if (req.contains("seed")) e.seed = req["seed"].get<std::uint64_t>();
    if (req.contains("threads")) e.threads = req["threads"].get<unsigned>();
    if (req.contains("proposal")) e.proposal = ldg::io::kernel_from(req["proposal"]);
    const auto est = ldg::estimate_tail_exponent(e);
    Json result = ldg::io::to_json(est);
    result["csv"] = ldg::to_csv(est);
    return emit(result, out);
  });
}

ldg_status ldg_validate_json(const char* config, char** out) {
  if (!out) return fail(LDG_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const Json cfg = config && *config ? parse_request(config) : Json::object();
    const auto report = ldg::run_validation(cfg);
    Json results = Json::array();
    for (const auto& r : report.results) {
      results.push_back({{"criterion", r.id}, {"suite", r.suite}, {"title", r.title}, {"passed", r.passed},
                         {"detail", r.detail}, {"seconds", r.seconds}, {"metrics", r.metrics}});
    }
    return emit({{"all_passed", report.all_passed()}, {"config", report.resolved_config}, {"results", results}},
                out);
  });
}

}  // extern "C"
