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

// Scenario files: one JSON document declaring the world, the agents, the
// evaluators and every suite's configuration. See scenarios/demo.json and
// the schema notes in README.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "truthstd/adjudication.hpp"
#include "truthstd/amplification.hpp"
#include "truthstd/certification.hpp"
#include "truthstd/evaluation.hpp"
#include "truthstd/world.hpp"

namespace truthstd {

struct DeployerSpec {
  bool claims_certified = false;
  std::string claimed_level;
  // Defaults to the hash of the agent as declared.
  std::optional<std::string> deployed_policy_hash;

  bool operator==(const DeployerSpec&) const = default;
};

struct AgentSpec {
  std::string id;
  std::string key_seed;
  std::string developer;
  AgentPolicy policy;
  std::map<PropositionId, double> belief_confidence;
  // Whether suites may read the belief store.
  bool transparent = true;
  DeployerSpec deployer;

  bool operator==(const AgentSpec&) const = default;
};

struct EvaluatorsSpec {
  static EvaluatorConfig Named(std::string name) {
    EvaluatorConfig c;
    c.name = std::move(name);
    return c;
  }

  EvaluatorConfig ground_truth = Named("ground_truth");
  std::vector<EvaluatorConfig> panel{Named("benchmark")};
  AggregationMethod aggregation = AggregationMethod::Median();

  bool operator==(const EvaluatorsSpec&) const = default;
};

struct TierSpec {
  std::string name;
  double cost = 1.0;
  std::optional<UncertaintyBand> band;
  EvaluatorsSpec evaluators;

  bool operator==(const TierSpec&) const = default;
};

struct LinkSpec {
  PropositionId from;
  PropositionId to;
  bool same_truth = true;

  bool operator==(const LinkSpec&) const = default;
};

struct CertificationSpec {
  // The first level is the default.
  std::vector<CertificationThresholds> levels{CertificationThresholds{}};
  std::vector<Conversation> validation;
  // Post-deployment conversation log.
  std::vector<Conversation> deployment;
  std::vector<Prompt> probabilistic_prompts;
  std::size_t worst_case_budget = 64;
  std::size_t n_first = 100;
  double discrepancy_factor = 2.0;
  CalibrationOptions calibration;
  std::uint64_t validity = 1000;

  bool operator==(const CertificationSpec&) const = default;
};

struct AmplificationSpec {
  FollowUpMode mode = FollowUpMode::kDeceptionProbe;
  FollowUpOptions followups;
  std::size_t bound = 0;
  std::size_t budget = 100;

  bool operator==(const AmplificationSpec&) const = default;
};

struct RevocationSpec {
  std::string system;
  std::uint64_t tick = 0;
  std::string reason;

  bool operator==(const RevocationSpec&) const = default;
};

struct Actors {
  std::string developer = "developer";
  std::string certifier = "certifier";
  std::string principal = "principal";
  std::string user = "user";
  std::string adjudicator = "adjudicator";

  bool operator==(const Actors&) const = default;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  WorldModel world;
  InterpretationTable interpretations;
  std::vector<LinkSpec> relevance;
  std::vector<AgentSpec> agents;
  EvaluatorsSpec evaluators;
  NegligenceConfig negligence;
  SeverityParams severity;
  std::vector<TierSpec> tiers;
  SanctionPolicy sanctions;
  CertificationSpec certification;
  AmplificationSpec amplification;
  // Prompt space for simulation and the worst-case searches.
  std::vector<Prompt> prompts;
  std::vector<RevocationSpec> revocations;
  Actors actors;

  bool operator==(const Scenario&) const = default;

  // Throws kUnknownSystem.
  const AgentSpec& FindAgent(const std::string& id) const;
  Agent BuildAgent(const AgentSpec& spec) const;
  RelevanceGraph Graph() const;
  EvaluationPipeline Pipeline() const;
  // A single-tier config built from the main evaluators when no tiers are
  // declared.
  TierConfig Tiers() const;
  // Throws kDanglingReference for an undeclared level.
  const CertificationThresholds& Level(const std::string& name) const;
};

// Throws kSchemaError (with a line number for syntax errors, a field path
// otherwise) or kDanglingReference naming the undeclared item.
Scenario ParseScenario(std::string_view text);
Scenario ScenarioFromJson(const Json& j);
// Also throws kIo when the file cannot be read.
Scenario LoadScenario(const std::filesystem::path& path);
Json ToJson(const Scenario& scenario);

// Checks every cross-reference. Throws kDanglingReference or kSchemaError.
void ValidateScenario(const Scenario& scenario);

// Relative paths that do not exist are looked up under the directory named
// by TRUTHSTD_SCENARIO_DIR.
std::filesystem::path ResolveScenarioPath(const std::string& path);

inline constexpr std::string_view kScenarioDirEnv = "TRUTHSTD_SCENARIO_DIR";

}  // namespace truthstd
