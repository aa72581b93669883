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

// ldg: command-line front end over the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ldg/ldg.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code(ldg_status s) {
  switch (s) {
    case LDG_OK: return 0;
    case LDG_ERR_INVALID: return 2;
    case LDG_ERR_INFEASIBLE: return 3;
    case LDG_ERR_NOT_CONVERGED: return 4;
    case LDG_ERR_RESOURCE: return 2;
    default: return kExitInternal;
  }
}

// Owns a library-allocated string.
struct LibString {
  char* p = nullptr;
  ~LibString() { ldg_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void check(ldg_status s) {
  if (s != LDG_OK) throw Failure{exit_code(s), ldg_last_error()};
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, path.string() + ": cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
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
    throw Failure{kExitConfig, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg};
  }
}

// A string where a measure or model is expected names a JSON file relative
// to the config directory; it is replaced by the file's contents.
void inline_files(Json& j, const std::vector<std::string>& keys, const fs::path& base) {
  for (const auto& key : keys) {
    if (j.contains(key) && j[key].is_string()) {
      const fs::path p = base / j[key].get<std::string>();
      j[key] = parse_text(read_text(p), p.string());
    }
  }
}

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
  std::vector<std::string> suites;
};

struct Context {
  std::string command;
  Json config;
  fs::path base;
  std::uint64_t seed = 0;
  Options opts;

  const Json& block(const char* key) const {
    if (!config.contains(key) || !config[key].is_object())
      throw Failure{kExitConfig, "config: missing object \"" + std::string(key) + "\""};
    return config[key];
  }
};

Context load(const std::string& command, const Options& opts) {
  Context ctx;
  ctx.command = command;
  ctx.opts = opts;
  if (!opts.config_path.empty()) {
    ctx.config = parse_text(read_text(opts.config_path), opts.config_path);
    ctx.base = fs::path(opts.config_path).parent_path();
  } else {
    ctx.config = Json::object();
  }
  if (!ctx.config.is_object()) throw Failure{kExitConfig, "config: top level must be an object"};
  inline_files(ctx.config, {"model"}, ctx.base);
  if (opts.seed) ctx.config["seed"] = *opts.seed;
  if (ctx.config.contains("seed")) {
    if (!ctx.config["seed"].is_number_unsigned())
      throw Failure{kExitConfig, "config: \"seed\" must be a nonnegative integer"};
    ctx.seed = ctx.config["seed"].get<std::uint64_t>();
  } else {
    ctx.config["seed"] = ctx.seed;
  }
  return ctx;
}

// Writes to --out/<name>, or to stdout when no directory was given.
void write_output(const Context& ctx, const std::string& name, const std::string& text) {
  if (ctx.opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(fs::path(ctx.opts.out) / name, std::ios::binary);
  if (!f) throw Failure{kExitInternal, "cannot write " + name};
  f << text;
}

void write_manifest(const Context& ctx, const Json& resolved, const std::vector<std::string>& files) {
  if (ctx.opts.out.empty()) return;
  Json m = {{"command", ctx.command}, {"version", ldg_version()}, {"seed", ctx.seed},
            {"config", resolved}, {"outputs", files}};
  write_output(ctx, "manifest.json", m.dump(2) + "\n");
}

struct Model {
  ldg_model* p = nullptr;
  explicit Model(const Json& j) { check(ldg_model_from_json(j.dump().c_str(), &p)); }
  ~Model() { ldg_model_free(p); }
};

struct Graph {
  ldg_graph* p = nullptr;
  ~Graph() { ldg_graph_free(p); }
  std::string edge_list() const {
    LibString s;
    check(ldg_graph_to_edge_list(p, &s.p));
    return s.str();
  }
  std::string measures() const {
    LibString s;
    check(ldg_graph_measures_json(p, &s.p));
    return s.str();
  }
};

using JsonCall = ldg_status (*)(const char*, char**);

// Calls a JSON endpoint. Output from a non-converged solve is kept and the
// status is returned for the exit code.
std::pair<std::string, int> call(JsonCall fn, const Json& request) {
  LibString s;
  const ldg_status st = fn(request.dump().c_str(), &s.p);
  if (st != LDG_OK && st != LDG_ERR_NOT_CONVERGED) throw Failure{exit_code(st), ldg_last_error()};
  if (st == LDG_ERR_NOT_CONVERGED) std::cerr << "ldg: warning: " << ldg_last_error() << "\n";
  return {s.str(), exit_code(st)};
}

std::uint64_t get_u64(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    throw Failure{kExitConfig, "config: \"" + std::string(key) + "\" must be a nonnegative integer"};
  return j[key].get<std::uint64_t>();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_generate(Context& ctx) {
  const Model model(ctx.block("model"));
  const std::uint64_t n = get_u64(ctx.config, "n");
  Graph g;
  check(ldg_graph_sample(model.p, n, ctx.seed, &g.p));
  write_output(ctx, "graph.txt", g.edge_list());
  write_output(ctx, "measures.json", g.measures());
  write_manifest(ctx, ctx.config, {"graph.txt", "measures.json"});
  return kExitOk;
}

int cmd_measure(Context& ctx) {
  if (!ctx.config.contains("graph") || !ctx.config["graph"].is_string())
    throw Failure{kExitConfig, "config: \"graph\" must name an edge-list file"};
  const fs::path p = ctx.base / ctx.config["graph"].get<std::string>();
  Graph g;
  check(ldg_graph_parse_edge_list(read_text(p).c_str(), &g.p));
  write_output(ctx, "measures.json", g.measures());
  write_manifest(ctx, ctx.config, {"measures.json"});
  return kExitOk;
}

int cmd_rate(Context& ctx) {
  Json req = ctx.block("rate");
  inline_files(req, {"varpi", "nu", "omega", "d", "model"}, ctx.base);
  if (!req.contains("model") && ctx.config.contains("model")) req["model"] = ctx.config["model"];
  ctx.config["rate"] = req;
  auto [text, code] = call(ldg_rate_json, req);
  write_output(ctx, "rate.json", text);
  write_manifest(ctx, ctx.config, {"rate.json"});
  return code;
}

int cmd_degree_rate(Context& ctx) {
  Json req = ctx.block("degree_rate");
  inline_files(req, {"d"}, ctx.base);
  ctx.config["degree_rate"] = req;
  auto [text, code] = call(ldg_degree_rate_json, req);
  write_output(ctx, "degree_rate.json", text);
  write_manifest(ctx, ctx.config, {"degree_rate.json"});
  return code;
}

int cmd_edge_rate(Context& ctx) {
  Json req = ctx.block("edge_rate");
  req["model"] = ctx.block("model");
  auto [text, code] = call(ldg_edge_rate_json, req);
  const Json out = Json::parse(text);
  std::string csv = "x,zeta,closed_form,extrapolated\n";
  for (const auto& row : out["rows"]) {
    csv += fmt(row["x"].get<double>()) + "," + (row["zeta"].is_number() ? fmt(row["zeta"].get<double>()) : "inf");
    csv += "," + (row.contains("closed_form") ? fmt(row["closed_form"].get<double>()) : std::string());
    csv += "," + (row.contains("extrapolated") ? fmt(row["extrapolated"].get<double>()) : std::string()) + "\n";
  }
  write_output(ctx, "edge_rate.csv", csv);
  if (!ctx.opts.out.empty()) write_output(ctx, "edge_rate.json", text);
  write_manifest(ctx, ctx.config, {"edge_rate.csv", "edge_rate.json"});
  return code;
}

int cmd_ising(Context& ctx) {
  auto [text, code] = call(ldg_ising_json, ctx.block("ising"));
  const Json out = Json::parse(text);
  std::string csv = "beta,c,annealed,oracle,abs_diff\n";
  for (const auto& row : out["rows"]) {
    csv += fmt(row["beta"].get<double>()) + "," + fmt(row["c"].get<double>()) + "," +
           fmt(row["annealed"].get<double>()) + "," + fmt(row["oracle"].get<double>()) + "," +
           fmt(row["abs_diff"].get<double>()) + "\n";
  }
  write_output(ctx, "ising.csv", csv);
  write_manifest(ctx, ctx.config, {"ising.csv"});
  return code;
}

int cmd_sample_conditional(Context& ctx) {
  Json req = ctx.block("conditional");
  inline_files(req, {"omega_n", "varpi_n"}, ctx.base);
  ctx.config["conditional"] = req;
  Graph g;
  check(ldg_graph_sample_conditional(req.dump().c_str(), ctx.seed, &g.p));
  write_output(ctx, "graph.txt", g.edge_list());
  write_output(ctx, "measures.json", g.measures());
  write_manifest(ctx, ctx.config, {"graph.txt", "measures.json"});
  return kExitOk;
}

int cmd_approximate(Context& ctx) {
  Json req = ctx.block("approximate");
  inline_files(req, {"varpi", "nu"}, ctx.base);
  req["seed"] = ctx.seed;
  ctx.config["approximate"] = req;
  auto [text, code] = call(ldg_approximate_json, req);
  write_output(ctx, "approximation.json", text);
  write_manifest(ctx, ctx.config, {"approximation.json"});
  return code;
}

int cmd_validate(Context& ctx) {
  Json req = ctx.config.contains("validate") ? ctx.config["validate"] : Json::object();
  req["seed"] = ctx.seed;
  if (ctx.opts.threads) req["threads"] = *ctx.opts.threads;
  if (!ctx.opts.suites.empty()) req["suites"] = ctx.opts.suites;
  auto [text, code] = call(ldg_validate_json, req);
  const Json out = Json::parse(text);
  for (const auto& r : out["results"]) {
    std::cerr << (r["passed"].get<bool>() ? "PASS " : "FAIL ") << r["criterion"].get<int>() << " "
              << r["title"].get<std::string>() << ": " << r["detail"].get<std::string>() << "\n";
  }
  write_output(ctx, "validation.json", text);
  write_manifest(ctx, out["config"], {"validation.json"});
  if (code != kExitOk) return code;
  return out["all_passed"].get<bool>() ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colored random graphs: sampling, rate functions and validation"};
  app.require_subcommand(1);
  Options opts;

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(Context&);
  };
  const Entry entries[] = {
      {"generate", "sample a graph; write its edge list and empirical measures", cmd_generate},
      {"measure", "empirical measures of an edge-list file", cmd_measure},
      {"rate", "evaluate J, I, I_omega, J_tilde, delta or zeta", cmd_rate},
      {"degree-rate", "degree rate with fixed-point diagnostics", cmd_degree_rate},
      {"edge-rate", "edge-count rate and finite-n exact exponents", cmd_edge_rate},
      {"ising", "annealed Ising free energy over a (beta, c) grid", cmd_ising},
      {"sample-conditional", "uniform graph with prescribed colour and pair counts", cmd_sample_conditional},
      {"approximate", "consistify, quantize and cap a (pair, neighbourhood) measure", cmd_approximate},
      {"validate", "run the acceptance suites", cmd_validate},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", opts.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "seed override");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    if (std::string(e.name) == "validate")
      sub->add_option("--suite", opts.suites, "suite to run (repeatable)");
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      if (!opts.out.empty()) fs::create_directories(opts.out);
      Context ctx = load(entry->name, opts);
      return entry->run(ctx);
    } catch (const Failure& f) {
      std::cerr << "ldg " << entry->name << ": " << f.message << "\n";
      return f.code;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "ldg " << entry->name << ": config: " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      std::cerr << "ldg " << entry->name << ": " << e.what() << "\n";
      return kExitInternal;
    }
  }
  return kExitInternal;
}
