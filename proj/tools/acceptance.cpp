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

// Runs every acceptance criterion and prints one line per criterion.
//
//   ldg_acceptance [--threads N] [--json PATH] [--expect-fail ID ...]
//
// Exit status is 0 when the set of failing criteria equals the --expect-fail
// set (empty by default), 1 otherwise.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/validate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  unsigned threads = 0;
  std::string json_path;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--threads", threads, "worker threads (0: hardware)");
  app.add_option("--json", json_path, "write the full report here");
  CLI11_PARSE(app, argc, argv);

  ldg::io::Json config = ldg::io::Json::object();
  if (threads > 0) config["threads"] = threads;
  ldg::ValidationReport report;
  try {
    report = ldg::run_validation(config);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 1;
  }

  std::set<int> failed;
  for (const auto& r : report.results) {
    std::printf("[%s] %2d %-10s %-40s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.suite.c_str(),
                r.title.c_str(), r.seconds, r.detail.c_str());
    if (!r.passed) failed.insert(r.id);
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  std::printf("%zu/%zu criteria passed\n", report.results.size() - failed.size(), report.results.size());

  if (!json_path.empty()) {
    ldg::io::Json out = {{"config", report.resolved_config}, {"results", ldg::io::Json::array()}};
    for (const auto& r : report.results)
      out["results"].push_back({{"criterion", r.id}, {"passed", r.passed}, {"detail", r.detail},
                                {"seconds", r.seconds}, {"metrics", r.metrics}});
    std::ofstream(json_path) << out.dump(2) << "\n";
  }

  if (failed != expected) {
    std::printf("failing set differs from the expected set\n");
    return 1;
  }
  return 0;
}
