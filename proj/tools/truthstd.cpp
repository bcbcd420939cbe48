/*
 * Copyright 2026 The truthstd Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// truthstd command line.
//
//   truthstd <simulate|adjudicate|certify|amplify|verify> [--scenario FILE]
//            [--seed N] [--out FILE] [--summary] [subcommand flags]
//
// The report goes to --out, or to stdout when --out is absent. Summary lines
// go to stdout with --out and to stderr without it. Exit codes are listed in
// README.md.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "truthstd/runner.hpp"
#include "truthstd/scenario.hpp"

namespace {

using namespace truthstd;

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::set<std::string> ParseSuites(const std::string& text) {
  std::set<std::string> out;
  if (text.empty() || text == "all") return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate, adjudicate, certify and audit AI truthfulness standards"};
  app.require_subcommand(1);

  std::string scenario_arg = "demo.json";
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool summary = false;
  std::string system;
  std::string suites = "all";
  std::string level;
  std::string reports;
  std::string registry_in;
  std::string registry_out;
  std::string statement;
  std::string statements_out;
  std::string history_out;
  bool serial = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_arg,
                    "Scenario file; relative names are also looked up in $" +
                        std::string(kScenarioDirEnv));
    sub->add_option("--seed", seed, "Override the scenario's master seed");
    sub->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    sub->add_flag("--summary", summary, "Print a human-readable summary");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Run every agent over the prompt space");
  add_common(simulate);
  simulate->add_option("--system", system, "Only this agent");
  simulate->add_option("--statements-out", statements_out, "Write signed statements (JSONL)");

  CLI::App* adjudicate = app.add_subcommand("adjudicate", "Adjudicate reported statements");
  add_common(adjudicate);
  adjudicate->add_option("--reports", reports, "Reports and evidence events (JSONL)");
  adjudicate->add_option("--system", system, "Only this agent's simulated statements");
  adjudicate->add_option("--history-out", history_out, "Write the tier history (JSONL)");

  CLI::App* certify = app.add_subcommand("certify", "Run certification suites for one system");
  add_common(certify);
  certify->add_option("--system", system, "System to certify")->required();
  certify->add_option("--suites", suites, "all, or a comma list of average,worst,calibration,honesty");
  certify->add_option("--level", level, "Certification level (defaults to the claimed one)");
  certify->add_option("--registry", registry_in, "Registry to start from (JSON)");
  certify->add_option("--registry-out", registry_out, "Write the updated registry (JSON)");
  certify->add_flag("--serial", serial, "Run suites on one thread");

  CLI::App* amplify = app.add_subcommand("amplify", "Worst-case follow-up questioning");
  add_common(amplify);
  amplify->add_option("--system", system, "Only this agent");

  CLI::App* verify = app.add_subcommand("verify", "User check of a statement against the registry");
  add_common(verify);
  verify->add_option("--system", system, "Claimed system")->required();
  verify->add_option("--registry", registry_in, "Registry (JSON); built from the scenario if absent");
  verify->add_option("--statement", statement, "Signed statement (JSON); generated if absent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunOptions options;
    CLI::App* chosen = app.get_subcommands().front();
    options.subcommand = SubcommandFromString(chosen->get_name());
    options.seed = seed;
    if (!system.empty()) options.system = system;
    options.suites = ParseSuites(suites);
    if (!level.empty()) options.level = level;
    if (!reports.empty()) options.reports = reports;
    if (!registry_in.empty()) options.registry = registry_in;
    if (!statement.empty()) options.statement = statement;
    options.parallel = !serial;

    const std::filesystem::path path = ResolveScenarioPath(scenario_arg);
    const Scenario scenario = LoadScenario(path);
    const RunReport report = Run(scenario, ScenarioFileHash(path), options);

    const std::string json = ToJson(report).dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << json;
    } else {
      WriteFile(out_path, json);
    }
    if (!statements_out.empty()) WriteFile(statements_out, report.statements_jsonl);
    if (!history_out.empty()) WriteFile(history_out, report.history_jsonl);
    if (!registry_out.empty() && report.registry) {
      WriteFile(registry_out, ToJson(*report.registry).dump(2) + "\n");
    }
    if (summary || options.subcommand == Subcommand::kVerify) {
      std::ostream& text = out_path.empty() ? std::cerr : std::cout;
      for (const auto& line : report.summary) text << line << '\n';
    }
    return report.exit_code;
  } catch (const Error& e) {
    std::cerr << "truthstd: " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "truthstd: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
