// Copyright 2026 The paradox-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "paradox/harness/explain.hpp"
#include "paradox/harness/run.hpp"
#include "paradox/harness/selftest.hpp"

namespace {

using namespace paradox;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

struct RunArgs {
  std::string file;
  std::string trace;
  std::string json;
  std::size_t depth = 4;
  bool no_select = false;
  bool dump_state = false;
  bool explain_update = false;
};

int cmd_run(const RunArgs& a) {
  harness::ReasoningOptions opt;
  opt.depth = a.depth;
  opt.use_selection = !a.no_select;
  auto rep = harness::run_source(harness::read_file(a.file), opt);
  if (a.explain_update) {
    for (const auto& u : rep.physics.updates) std::cout << u;
  }
  if (a.dump_state) {
    for (const auto& s : rep.physics.states) std::cout << "t=" << s.time << " " << s.label << "\n" << s.text << "\n";
  }
  if (rep.experiment.query == dsl::Query::kClosureDump) std::cout << harness::closure_dump(rep.reasoning);
  std::cout << harness::summary(rep);
  if (!a.trace.empty()) write_file(a.trace, harness::full_trace(rep.reasoning));
  if (!a.json.empty()) {
    auto j = harness::to_json(rep);
    j["trace"] = nlohmann::ordered_json::parse(harness::trace_json(rep.reasoning));
    write_file(a.json, j.dump(2) + "\n");
  }
  return rep.exit_code();
}

int cmd_explain(const std::string& file, int at, const std::optional<std::string>& agent) {
  auto exp = harness::load_experiment(harness::read_file(file));
  std::cout << harness::explain(exp, at, agent);
  return 0;
}

int cmd_selftest(harness::SelftestScope scope) {
  if (!scope.theorems && !scope.quantum && !scope.logic) scope = {true, true, true};
  int failed = 0;
  for (const auto& c : harness::selftest(scope)) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.pass) std::cout << ": " << c.detail;
    std::cout << "\n";
    failed += !c.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paradox-lab: multi-agent reasoning about box-world and quantum experiments"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and search for contradictions");
  run_cmd->add_option("file", run.file, "Experiment file (.exp)")->required();
  run_cmd->add_option("--trace", run.trace, "Write the derivation trace to this file");
  run_cmd->add_option("--json", run.json, "Write the JSON report to this file");
  run_cmd->add_option("--depth", run.depth, "Knowledge nesting bound")->check(CLI::Range(1, 16));
  run_cmd->add_flag("--no-select", run.no_select, "Ignore SELECT lines");
  run_cmd->add_flag("--dump-state", run.dump_state, "Print the state after every event");
  run_cmd->add_flag("--explain-update", run.explain_update, "Print the memory update maps");

  std::string explain_file;
  int explain_at = 0;
  std::string explain_agent;
  auto* explain_cmd = app.add_subcommand("explain", "Show what each agent describes at a given time");
  explain_cmd->add_option("file", explain_file, "Experiment file (.exp)")->required();
  explain_cmd->add_option("--at", explain_at, "Time index")->required();
  explain_cmd->add_option("--agent", explain_agent, "Only this agent");

  harness::SelftestScope scope;
  bool all = false;
  auto* self_cmd = app.add_subcommand("selftest", "Run built-in checks");
  self_cmd->add_flag("--theorems", scope.theorems, "Polytope and memory-update checks");
  self_cmd->add_flag("--quantum", scope.quantum, "Quantum support-table checks");
  self_cmd->add_flag("--logic", scope.logic, "Reasoning checks on the PR-box experiment");
  self_cmd->add_flag("--all", all, "Everything");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : harness::kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*explain_cmd) {
      return cmd_explain(explain_file, explain_at,
                         explain_agent.empty() ? std::nullopt : std::optional<std::string>(explain_agent));
    }
    if (all) scope = {true, true, true};
    return cmd_selftest(scope);
  } catch (const dsl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitUsage;
  } catch (const harness::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return harness::kExitUsage;
  } catch (const harness::ExplainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitUsage;
  } catch (const paradox::Error& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return harness::kExitPhysics;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return harness::kExitUsage;
  }
}
