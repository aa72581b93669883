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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <string>

#include "ldg/ldg.h"

using Json = nlohmann::json;

namespace {

const char* kModel = R"({"m": 2, "mu": [0.5, 0.5], "C": [[2, 1], [1, 3]]})";

struct Out {
  char* p = nullptr;
  ~Out() { ldg_string_free(p); }
  Json json() const { return Json::parse(p); }
};

}  // namespace

TEST_CASE("model and graph handles") {
  ldg_model* model = nullptr;
  REQUIRE(ldg_model_from_json(kModel, &model) == LDG_OK);
  ldg_graph* g = nullptr;
  REQUIRE(ldg_graph_sample(model, 200, 7, &g) == LDG_OK);
  CHECK(ldg_graph_vertex_count(g) == 200);
  const std::size_t edges = ldg_graph_edge_count(g);
  CHECK(edges > 0);

  Out text;
  REQUIRE(ldg_graph_to_edge_list(g, &text.p) == LDG_OK);
  ldg_graph* back = nullptr;
  REQUIRE(ldg_graph_parse_edge_list(text.p, &back) == LDG_OK);
  Out again;
  REQUIRE(ldg_graph_to_edge_list(back, &again.p) == LDG_OK);
  CHECK(std::string(text.p) == std::string(again.p));

  Out measures;
  REQUIRE(ldg_graph_measures_json(g, &measures.p) == LDG_OK);
  const Json m = measures.json();
  CHECK(m["edge_count"] == edges);
  CHECK(m["L1"]["n"] == 200);

  // Condition on the sample's own counts.
  const Json targets = {{"omega_n", m["L1"]}, {"varpi_n", m["L2"]}};
  ldg_graph* cond = nullptr;
  REQUIRE(ldg_graph_sample_conditional(targets.dump().c_str(), 3, &cond) == LDG_OK);
  Out cm;
  REQUIRE(ldg_graph_measures_json(cond, &cm.p) == LDG_OK);
  CHECK(cm.json()["L2"] == m["L2"]);

  ldg_graph_free(cond);
  ldg_graph_free(back);
  ldg_graph_free(g);
  ldg_model_free(model);
  ldg_graph_free(nullptr);
  ldg_model_free(nullptr);
}

TEST_CASE("status codes and last error") {
  ldg_model* model = nullptr;
  CHECK(ldg_model_from_json("{\"mu\": [0.5, 0.5], ", &model) == LDG_ERR_INVALID);
  CHECK(model == nullptr);
  CHECK(std::string(ldg_last_error()).find("request:1:") == 0);
  CHECK(ldg_model_from_json(R"({"mu": [0.5, 0.5], "C": [[1, 2], [3, 1]]})", &model) == LDG_ERR_INVALID);
  CHECK(std::string(ldg_last_error()).find("(0,1)") != std::string::npos);
  CHECK(ldg_model_from_json(kModel, nullptr) == LDG_ERR_INVALID);

  ldg_graph* g = nullptr;
  const char* impossible = R"({"omega_n": {"n": 3, "counts": [3]}, "varpi_n": {"n": 3, "counts": [[8]]}})";
  CHECK(ldg_graph_sample_conditional(impossible, 1, &g) == LDG_ERR_INFEASIBLE);
  CHECK(g == nullptr);
  CHECK(ldg_graph_parse_edge_list("2 1\n0 0\n0 0\n", &g) == LDG_ERR_INVALID);

  Out out;
  CHECK(ldg_rate_json(R"({"rate": "nope"})", &out.p) == LDG_ERR_INVALID);
  CHECK(out.p == nullptr);
  CHECK(ldg_validate_json(R"({"tolerances": {"edge_relative": 0.5}})", &out.p) == LDG_ERR_INVALID);
  CHECK(std::string(ldg_version()).size() > 0);
}

TEST_CASE("rate endpoint") {
  Out zeta;
  REQUIRE(ldg_rate_json(R"({"rate": "zeta", "x": 1.5, "model": {"mu": [1], "C": [[2]]}})", &zeta.p) == LDG_OK);
  const Json z = zeta.json();
  CHECK(z["value"].get<double>() == doctest::Approx(1.5 * std::log(1.5) - 0.5).epsilon(1e-9));
  CHECK(z["closed_form"].get<double>() == doctest::Approx(1.5 * std::log(1.5) - 0.5).epsilon(1e-14));

  Out j;
  const Json req = {{"rate", "J"},
                    {"model", {{"mu", {1}}, {"C", {{1}}}}},
                    {"varpi", {{"weights", {{1.0}}}}},
                    {"nu", {{"m", 1}, {"weights", {{{"color", 0}, {"ell", {5}}, {"mass", 1.0}}}}}}};
  REQUIRE(ldg_rate_json(req.dump().c_str(), &j.p) == LDG_OK);
  CHECK(j.json()["value"] == "inf");
  CHECK(j.json()["reason"] == "not_sub_consistent");

  Out d;
  REQUIRE(ldg_degree_rate_json(R"({"c": 2, "d": {"pmf": [1]}})", &d.p) == LDG_OK);
  CHECK(d.json()["value"].get<double>() == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(d.json()["branch"] == "fixed_point");
}

TEST_CASE("table endpoints") {
  Out ising;
  REQUIRE(ldg_ising_json(R"({"beta": [0, 1], "c": [1]})", &ising.p) == LDG_OK);
  const Json rows = ising.json()["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(rows[0]["annealed"].get<double>() - std::log(2.0)) < 1e-10);
  CHECK(rows[1]["abs_diff"].get<double>() < 1e-6);

  Out edge;
  REQUIRE(ldg_edge_rate_json(R"({"model": {"mu": [1], "C": [[2]]}, "x": [1.5], "sizes": [250, 500]})", &edge.p) ==
          LDG_OK);
  const Json e = edge.json()["rows"][0];
  CHECK(e["exact"].size() == 2);
  CHECK(e.contains("extrapolated"));

  Out tail;
  const char* req = R"({"model": {"mu": [1], "C": [[2]]}, "event": {"kind": "edges_at_least", "threshold": 1.2},
                        "sizes": [50], "replicas": 2000, "seed": 3})";
  REQUIRE(ldg_tail_experiment_json(req, &tail.p) == LDG_OK);
  CHECK(tail.json()["sizes"][0]["replicas"] == 2000);
}
