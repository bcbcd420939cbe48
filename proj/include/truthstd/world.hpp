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

// Ground-truth world, agent beliefs and statement-emitting policies, plus the
// three trace predicates:
//
//   truthful   every stated claim matches the world
//   honest     every stated claim matches the speaker's belief at that tick
//   undeluded  every belief matches the world
//
// honest && undeluded implies truthful; nothing else is forced.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "truthstd/rng.hpp"
#include "truthstd/statement.hpp"

namespace truthstd {

struct WorldPatch {
  std::map<PropositionId, bool> truths;
  std::map<PropositionId, double> frequencies;

  bool empty() const { return truths.empty() && frequencies.empty(); }
};

class WorldModel {
 public:
  void Set(const PropositionId& p, bool truth) { truths_[p] = truth; }
  // Declares a base rate; evaluators then score p probabilistically.
  // Throws kInvalidArgument outside [0,1].
  void SetFrequency(const PropositionId& p, double frequency);

  bool Contains(const PropositionId& p) const { return truths_.count(p) != 0; }
  // Throws kUnknownProposition.
  bool Truth(const PropositionId& p) const;
  std::optional<double> Frequency(const PropositionId& p) const;
  // Faithful probability that `p` has truth value `polarity`: the declared
  // frequency when there is one, otherwise 1 or 0 from the truth table.
  double ProbabilityOf(const PropositionId& p, bool polarity) const;

  void Apply(const WorldPatch& patch);

  const std::map<PropositionId, bool>& truths() const { return truths_; }
  const std::map<PropositionId, double>& frequencies() const { return frequencies_; }

  bool operator==(const WorldModel&) const = default;

 private:
  std::map<PropositionId, bool> truths_;
  std::map<PropositionId, double> frequencies_;
};

struct BeliefStore {
  std::map<PropositionId, bool> beliefs;
  // Probability the agent assigns to the proposition being true.
  std::map<PropositionId, double> confidence;

  bool Holds(const PropositionId& p) const { return beliefs.count(p) != 0; }
  // Throws kUnknownProposition.
  bool Believes(const PropositionId& p) const;
  double Confidence(const PropositionId& p) const;

  bool operator==(const BeliefStore&) const = default;
};

// Reward for asserting each polarity of a proposition.
struct Payoff {
  double if_true = 0.0;
  double if_false = 0.0;

  bool operator==(const Payoff&) const = default;
};
using PayoffTable = std::map<PropositionId, Payoff>;

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

struct AgentPolicy {
  // Pressure toward asserting the agent's belief. kInfiniteWeight forces it.
  double truth_weight = kInfiniteWeight;
  // Strength of optimization toward the payoff-maximizing polarity.
  double selection_power = 0.0;
  // Beliefs on these propositions are flipped relative to the world.
  std::set<PropositionId> delusion_map;
  bool defend_mistakes = false;
  double decline_rate = 0.0;
  // Probability an answer is flipped by an honest mistake.
  double mistake_rate = 0.0;
  // Propositions on which the agent always asserts the negation of its belief.
  std::set<PropositionId> lie_triggers;
  // Claims appended verbatim to every answer (metric padding).
  std::vector<Claim> padding;
  PayoffTable payoffs;

  bool operator==(const AgentPolicy&) const = default;
};

// Throws kInvalidArgument for negative weights or rates outside [0,1].
void ValidatePolicy(const AgentPolicy& policy);

enum class PromptMode { kCategorical, kProbabilistic };

struct Prompt {
  PropositionId proposition;
  PromptMode mode = PromptMode::kCategorical;
  // Free-form prompt type, e.g. "medical"; used to model distribution gaps.
  std::string topic;

  bool operator==(const Prompt&) const = default;
};

struct Decline {
  PropositionId prompt;
  std::uint64_t tick = 0;
};

using StepResult = std::variant<Statement, Decline>;

struct Trace {
  std::vector<Statement> statements;
  // belief_snapshots[i] is the belief store in force when statements[i] was
  // emitted. Snapshots are shared until a belief update copies them.
  std::vector<std::shared_ptr<const BeliefStore>> belief_snapshots;
};

class Agent {
 public:
  Agent(std::string id, AgentPolicy policy, BeliefStore beliefs);

  // Beliefs mirror the world except on the delusion map. Propositions with
  // a declared frequency are believed when frequency >= 0.5, at that
  // confidence. `confidence_overrides` replace the confidence (and set the
  // belief to confidence >= 0.5).
  static Agent FromWorld(std::string id, AgentPolicy policy, const WorldModel& world,
                         const std::map<PropositionId, double>& confidence_overrides = {});

  // Answers one prompt. Draws exactly three uniforms from `rng` whatever the
  // outcome, so streams stay aligned across policies.
  // Throws kUnknownProposition if the prompt is not in `world` or beliefs.
  StepResult Step(const Prompt& prompt, const WorldModel& world, Rng& rng,
                  const std::string& context = "");

  // Emits a statement with the given claims at the next tick and records it.
  Statement Say(std::vector<Claim> claims, const std::string& context = "");

  // Belief-update event (evidence presented to the agent).
  void UpdateBelief(const PropositionId& p, bool value, double confidence);

  // The polarity the agent's belief supports, with no policy applied.
  bool BeliefAbout(const PropositionId& p) const { return beliefs_->Believes(p); }
  // The polarity the policy would assert given a uniform draw `u`, before
  // declines and mistakes.
  bool IntendedPolarity(const PropositionId& p, double u) const;

  const std::string& id() const { return id_; }
  const AgentPolicy& policy() const { return policy_; }
  const BeliefStore& beliefs() const { return *beliefs_; }
  const Trace& trace() const { return trace_; }
  std::uint64_t clock() const { return clock_; }
  void ClearTrace() { trace_ = Trace{}; }

 private:
  std::string id_;
  AgentPolicy policy_;
  std::shared_ptr<const BeliefStore> beliefs_;
  Trace trace_;
  std::uint64_t clock_ = 0;
};

// Scenario-declared evidential links between propositions. A link with
// same_truth = true says both propositions share a truth value; false says
// they have opposite values. Links are symmetric.
struct EvidentialLink {
  PropositionId target;
  bool same_truth = true;

  bool operator==(const EvidentialLink&) const = default;
};

class RelevanceGraph {
 public:
  // Throws kInvalidArgument on a self-link. Re-linking a pair keeps the
  // first declaration.
  void Link(const PropositionId& a, const PropositionId& b, bool same_truth);
  // Declares a proposition with no links.
  void AddNode(const PropositionId& p) { adjacency_[p]; }

  bool Contains(const PropositionId& p) const { return adjacency_.count(p) != 0; }
  // Neighbors in insertion order; empty for unknown propositions.
  const std::vector<EvidentialLink>& Neighbors(const PropositionId& p) const;
  const std::map<PropositionId, std::vector<EvidentialLink>>& adjacency() const {
    return adjacency_;
  }

  bool operator==(const RelevanceGraph&) const = default;

 private:
  std::map<PropositionId, std::vector<EvidentialLink>> adjacency_;
};

struct PredicateViolation {
  std::string statement_id;
  std::size_t claim_index = 0;
  PropositionId proposition;

  bool operator==(const PredicateViolation&) const = default;
};

struct PredicateReport {
  std::string predicate;
  std::vector<PredicateViolation> violations;
  // Claims (or beliefs) inspected.
  std::size_t checked = 0;

  bool holds() const { return violations.empty(); }
  double rate() const {
    return checked == 0 ? 0.0 : static_cast<double>(violations.size()) / checked;
  }
};

// The polarity a claim commits to, or nullopt when it commits to none
// (ambiguous, self-regarding, or probabilistic at exactly 0.5).
std::optional<bool> StatedPolarity(const Claim& claim);

// What the predicates compare against: the truth value, or for a base-rate
// proposition the majority outcome (frequency >= 0.5). A single realized
// day of rain is not something a calibrated agent can be expected to know.
bool ReferenceTruth(const WorldModel& world, const PropositionId& p);

PredicateReport CheckTruthful(const Trace& trace, const WorldModel& world);
PredicateReport CheckHonest(const Trace& trace);
PredicateReport CheckUndeluded(const BeliefStore& beliefs, const WorldModel& world);

Json ToJson(const AgentPolicy& policy);
AgentPolicy AgentPolicyFromJson(const Json& j);
Json ToJson(const Prompt& prompt);
Prompt PromptFromJson(const Json& j);
Json ToJson(const PredicateReport& report);
Json ToJson(const WorldPatch& patch);
WorldPatch WorldPatchFromJson(const Json& j);

}  // namespace truthstd
