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

// Subcommand orchestration. Every module draws from its own seed stream,
// SplitSeed(master, "<subcommand>/<module>/<agent>"), so adding a stream
// never shifts an existing one.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "truthstd/attestation.hpp"
#include "truthstd/certification.hpp"
#include "truthstd/error.hpp"
#include "truthstd/scenario.hpp"

namespace truthstd {

enum class Subcommand { kSimulate, kAdjudicate, kCertify, kAmplify, kVerify };

std::string_view ToString(Subcommand sub);
// Throws kInvalidArgument.
Subcommand SubcommandFromString(std::string_view name);

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSchema = 2,
  kExitDanglingReference = 3,
  kExitVerifyFailed = 4,
  kExitCertificationRejected = 5,
  kExitSignatureInvalid = 6,
  kExitIo = 7,
  kExitAmplificationFailed = 8,
  kExitBeliefAccessDenied = 9,
  kExitInternal = 10,
};

int ExitCodeFor(const Error& e);

inline constexpr std::string_view kCertificationSuites[] = {"average", "worst", "calibration",
                                                            "honesty"};

struct RunOptions {
  Subcommand subcommand = Subcommand::kSimulate;
  std::optional<std::uint64_t> seed;
  // Restricts simulate/amplify to one agent; required by certify and verify.
  std::optional<std::string> system;
  // Certification suites; empty means all that apply.
  std::set<std::string> suites;
  std::optional<std::string> level;
  // adjudicate: JSON lines of {"statement","signature","reporter"} reports
  // and {"evidence": patch} events. Generated from a simulation when absent.
  std::optional<std::filesystem::path> reports;
  // certify/verify: registry to start from instead of a fresh one.
  std::optional<std::filesystem::path> registry;
  // verify: a signed statement (JSON). Generated when absent.
  std::optional<std::filesystem::path> statement;
  // Run certification suites on worker threads.
  bool parallel = true;
};

struct RunReport {
  std::string engine_version;
  std::string scenario_name;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  Subcommand subcommand = Subcommand::kSimulate;
  int exit_code = kExitOk;
  // Suite name -> report, in fixed suite order.
  Json suites = Json::object();
  // Human-readable lines for --summary (and verify's findings).
  std::vector<std::string> summary;
  double wall_seconds = 0.0;

  // Artifacts for --statements-out, --registry-out and case history export.
  std::string statements_jsonl;
  std::optional<Registry> registry;
  std::string history_jsonl;
};

// The timing field is omitted when `with_timing` is false; everything else
// is a pure function of scenario, seed and options.
Json ToJson(const RunReport& report, bool with_timing = true);

// SHA-256 of the file bytes.
std::string ScenarioFileHash(const std::filesystem::path& path);

RunReport Run(const Scenario& scenario, const std::string& scenario_hash,
              const RunOptions& options);

struct CertificationRun {
  SuiteResults results;
  std::optional<AuditReport> audit;
  std::vector<std::string> skipped;
  std::optional<CertificationOutcome> outcome;
};

// Runs the requested suites (all applicable when empty) for one agent and
// decides certification at `thresholds`.
CertificationRun RunCertification(const Scenario& scenario, const AgentSpec& agent,
                                  const std::set<std::string>& suites,
                                  const CertificationThresholds& thresholds,
                                  std::uint64_t seed, std::uint64_t issued_at, bool parallel);

// Registers every agent, certifies those whose deployer claims certification,
// records the claims and applies the scenario's revocations in tick order.
Registry BuildRegistry(const Scenario& scenario, std::uint64_t seed);

KeyPair AgentKey(const AgentSpec& agent);
std::string DeployedPolicyHash(const Scenario& scenario, const AgentSpec& agent);

}  // namespace truthstd
