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

#include "truthstd/world.hpp"

#include <cmath>

#include "json_fields.hpp"
#include "truthstd/error.hpp"

namespace truthstd {

namespace {

[[noreturn]] void Unknown(const PropositionId& p) {
  throw Error(ErrorCode::kUnknownProposition, "unknown proposition '" + p.value + "'");
}

bool InUnitInterval(double x) { return x >= 0.0 && x <= 1.0; }

// Logistic probability of asserting `true` given the score difference
// score(true) - score(false), computed without overflow.
double AssertTrueProbability(double diff) {
  if (diff >= 0.0) return 1.0 / (1.0 + std::exp(-diff));
  const double e = std::exp(diff);
  return e / (1.0 + e);
}

}  // namespace

void WorldModel::SetFrequency(const PropositionId& p, double frequency) {
  if (!InUnitInterval(frequency)) {
    throw Error(ErrorCode::kInvalidArgument, "frequency of '" + p.value + "' outside [0,1]");
  }
  frequencies_[p] = frequency;
}

bool WorldModel::Truth(const PropositionId& p) const {
  auto it = truths_.find(p);
  if (it == truths_.end()) Unknown(p);
  return it->second;
}

std::optional<double> WorldModel::Frequency(const PropositionId& p) const {
  auto it = frequencies_.find(p);
  if (it == frequencies_.end()) return std::nullopt;
  return it->second;
}

double WorldModel::ProbabilityOf(const PropositionId& p, bool polarity) const {
  const bool truth = Truth(p);
  if (auto f = Frequency(p)) return polarity ? *f : 1.0 - *f;
  return truth == polarity ? 1.0 : 0.0;
}

void WorldModel::Apply(const WorldPatch& patch) {
  for (const auto& [p, v] : patch.truths) truths_[p] = v;
  for (const auto& [p, f] : patch.frequencies) SetFrequency(p, f);
}

bool BeliefStore::Believes(const PropositionId& p) const {
  auto it = beliefs.find(p);
  if (it == beliefs.end()) Unknown(p);
  return it->second;
}

double BeliefStore::Confidence(const PropositionId& p) const {
  auto it = confidence.find(p);
  if (it != confidence.end()) return it->second;
  return Believes(p) ? 1.0 : 0.0;
}

void ValidatePolicy(const AgentPolicy& policy) {
  if (!(policy.truth_weight >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "truth_weight must be >= 0");
  }
  if (!(policy.selection_power >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "selection_power must be >= 0");
  }
  if (!InUnitInterval(policy.decline_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "decline_rate must lie in [0,1]");
  }
  if (!InUnitInterval(policy.mistake_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "mistake_rate must lie in [0,1]");
  }
}

Agent::Agent(std::string id, AgentPolicy policy, BeliefStore beliefs)
    : id_(std::move(id)),
      policy_(std::move(policy)),
      beliefs_(std::make_shared<const BeliefStore>(std::move(beliefs))) {
  ValidatePolicy(policy_);
  for (const auto& [p, c] : beliefs_->confidence) {
    if (!InUnitInterval(c)) {
      throw Error(ErrorCode::kInvalidArgument, "confidence of '" + p.value + "' outside [0,1]");
    }
  }
}

Agent Agent::FromWorld(std::string id, AgentPolicy policy, const WorldModel& world,
                       const std::map<PropositionId, double>& confidence_overrides) {
  BeliefStore store;
  for (const auto& [p, truth] : world.truths()) {
    const bool deluded = policy.delusion_map.count(p) != 0;
    if (auto f = world.Frequency(p)) {
      const double c = deluded ? 1.0 - *f : *f;
      store.beliefs[p] = c >= 0.5;
      store.confidence[p] = c;
    } else {
      const bool belief = deluded ? !truth : truth;
      store.beliefs[p] = belief;
      store.confidence[p] = belief ? 1.0 : 0.0;
    }
  }
  for (const auto& [p, c] : confidence_overrides) {
    if (!world.Contains(p)) Unknown(p);
    store.beliefs[p] = c >= 0.5;
    store.confidence[p] = c;
  }
  return Agent(std::move(id), std::move(policy), std::move(store));
}

bool Agent::IntendedPolarity(const PropositionId& p, double u) const {
  const bool belief = beliefs_->Believes(p);
  if (policy_.lie_triggers.count(p) != 0) return !belief;
  if (std::isinf(policy_.truth_weight)) return belief;

  double diff = 0.0;
  if (policy_.truth_weight > 0.0) diff += belief ? policy_.truth_weight : -policy_.truth_weight;
  if (policy_.selection_power > 0.0) {
    auto it = policy_.payoffs.find(p);
    if (it != policy_.payoffs.end()) {
      const double gain = it->second.if_true - it->second.if_false;
      if (gain != 0.0) diff += policy_.selection_power * gain;
    }
  }
  if (std::isinf(diff)) return diff > 0.0;
  return u < AssertTrueProbability(diff);
}

StepResult Agent::Step(const Prompt& prompt, const WorldModel& world, Rng& rng,
                       const std::string& context) {
  const PropositionId& p = prompt.proposition;
  if (!world.Contains(p) || !beliefs_->Holds(p)) Unknown(p);

  const double u_decline = rng.Uniform();
  const double u_polarity = rng.Uniform();
  const double u_mistake = rng.Uniform();

  if (u_decline < policy_.decline_rate) {
    return Decline{p, ++clock_};
  }

  const bool belief = beliefs_->Believes(p);
  bool chosen = IntendedPolarity(p, u_polarity);
  if (u_mistake < policy_.mistake_rate) chosen = !chosen;

  Claim claim = Claim::About(p, chosen);
  if (prompt.mode == PromptMode::kProbabilistic) {
    // The stated probability is the agent's confidence in the proposition,
    // reversed when the policy asserts against the belief.
    const double c = beliefs_->Confidence(p);
    claim.polarity = true;
    claim.confidence = ConfidenceLevel::Probabilistic(chosen == belief ? c : 1.0 - c);
  }

  std::vector<Claim> claims{std::move(claim)};
  for (const auto& pad : policy_.padding) claims.push_back(pad);
  return Say(std::move(claims), context);
}

Statement Agent::Say(std::vector<Claim> claims, const std::string& context) {
  Statement s;
  s.timestamp = ++clock_;
  s.id = id_ + "#" + std::to_string(s.timestamp);
  s.speaker = id_;
  s.claims = std::move(claims);
  s.context = context;
  ValidateStatement(s);
  trace_.statements.push_back(s);
  trace_.belief_snapshots.push_back(beliefs_);
  return s;
}

void Agent::UpdateBelief(const PropositionId& p, bool value, double confidence) {
  if (!InUnitInterval(confidence)) {
    throw Error(ErrorCode::kInvalidArgument, "confidence outside [0,1]");
  }
  auto next = std::make_shared<BeliefStore>(*beliefs_);
  next->beliefs[p] = value;
  next->confidence[p] = confidence;
  beliefs_ = std::move(next);
}

void RelevanceGraph::Link(const PropositionId& a, const PropositionId& b, bool same_truth) {
  if (a == b) throw Error(ErrorCode::kInvalidArgument, "self-link on '" + a.value + "'");
  auto add = [this, same_truth](const PropositionId& from, const PropositionId& to) {
    auto& links = adjacency_[from];
    for (const auto& l : links) {
      if (l.target == to) return;
    }
    links.push_back(EvidentialLink{to, same_truth});
  };
  add(a, b);
  add(b, a);
}

const std::vector<EvidentialLink>& RelevanceGraph::Neighbors(const PropositionId& p) const {
  static const std::vector<EvidentialLink> kNone;
  auto it = adjacency_.find(p);
  return it == adjacency_.end() ? kNone : it->second;
}

std::optional<bool> StatedPolarity(const Claim& claim) {
  if (claim.is_ambiguous() || claim.self_regarding) return std::nullopt;
  if (auto q = claim.confidence.probability()) {
    if (*q == 0.5) return std::nullopt;
    return *q > 0.5 ? claim.polarity : !claim.polarity;
  }
  return claim.polarity;
}

bool ReferenceTruth(const WorldModel& world, const PropositionId& p) {
  return world.ProbabilityOf(p, true) >= 0.5;
}

PredicateReport CheckTruthful(const Trace& trace, const WorldModel& world) {
  PredicateReport report{"truthful", {}, 0};
  for (const auto& s : trace.statements) {
    for (std::size_t i = 0; i < s.claims.size(); ++i) {
      const auto stated = StatedPolarity(s.claims[i]);
      if (!stated) continue;
      ++report.checked;
      const auto& p = s.claims[i].proposition();
      if (ReferenceTruth(world, p) != *stated) report.violations.push_back({s.id, i, p});
    }
  }
  return report;
}

PredicateReport CheckHonest(const Trace& trace) {
  PredicateReport report{"honest", {}, 0};
  for (std::size_t k = 0; k < trace.statements.size(); ++k) {
    const auto& s = trace.statements[k];
    const BeliefStore& beliefs = *trace.belief_snapshots.at(k);
    for (std::size_t i = 0; i < s.claims.size(); ++i) {
      const auto stated = StatedPolarity(s.claims[i]);
      if (!stated) continue;
      ++report.checked;
      const auto& p = s.claims[i].proposition();
      if (beliefs.Believes(p) != *stated) report.violations.push_back({s.id, i, p});
    }
  }
  return report;
}

PredicateReport CheckUndeluded(const BeliefStore& beliefs, const WorldModel& world) {
  PredicateReport report{"undeluded", {}, 0};
  for (const auto& [p, believed] : beliefs.beliefs) {
    ++report.checked;
    if (ReferenceTruth(world, p) != believed) report.violations.push_back({"", 0, p});
  }
  return report;
}

Json ToJson(const AgentPolicy& policy) {
  Json j = Json::object();
  j["truth_weight"] = fields::NumberOrInf(policy.truth_weight);
  j["selection_power"] = fields::NumberOrInf(policy.selection_power);
  Json delusions = Json::array();
  for (const auto& p : policy.delusion_map) delusions.push_back(p.value);
  j["delusion_map"] = std::move(delusions);
  j["defend_mistakes"] = policy.defend_mistakes;
  j["decline_rate"] = policy.decline_rate;
  j["mistake_rate"] = policy.mistake_rate;
  Json triggers = Json::array();
  for (const auto& p : policy.lie_triggers) triggers.push_back(p.value);
  j["lie_triggers"] = std::move(triggers);
  Json padding = Json::array();
  for (const auto& c : policy.padding) padding.push_back(ToJson(c));
  j["padding"] = std::move(padding);
  Json payoffs = Json::object();
  for (const auto& [p, pay] : policy.payoffs) {
    payoffs[p.value] = Json{{"if_true", pay.if_true}, {"if_false", pay.if_false}};
  }
  j["payoffs"] = std::move(payoffs);
  return j;
}

AgentPolicy AgentPolicyFromJson(const Json& j) {
  using namespace fields;
  Object(j, "policy");
  AgentPolicy policy;
  policy.truth_weight = OptNumber(j, "truth_weight", kInfiniteWeight);
  policy.selection_power = OptNumber(j, "selection_power", 0.0);
  if (const Json* d = Opt(j, "delusion_map")) {
    for (const auto& p : Array(*d, "delusion_map")) {
      policy.delusion_map.insert(PropositionId{String(p, "delusion_map[]")});
    }
  }
  policy.defend_mistakes = OptBool(j, "defend_mistakes", false);
  policy.decline_rate = OptNumber(j, "decline_rate", 0.0);
  policy.mistake_rate = OptNumber(j, "mistake_rate", 0.0);
  if (const Json* t = Opt(j, "lie_triggers")) {
    for (const auto& p : Array(*t, "lie_triggers")) {
      policy.lie_triggers.insert(PropositionId{String(p, "lie_triggers[]")});
    }
  }
  if (const Json* pad = Opt(j, "padding")) {
    for (const auto& c : Array(*pad, "padding")) policy.padding.push_back(ClaimFromJson(c));
  }
  if (const Json* pay = Opt(j, "payoffs")) {
    for (const auto& [name, v] : Object(*pay, "payoffs").items()) {
      policy.payoffs[PropositionId{name}] =
          Payoff{OptNumber(v, "if_true", 0.0), OptNumber(v, "if_false", 0.0)};
    }
  }
  try {
    ValidatePolicy(policy);
  } catch (const Error& e) {
    Fail(e.what());
  }
  return policy;
}

Json ToJson(const Prompt& prompt) {
  Json j = Json::object();
  j["proposition"] = prompt.proposition.value;
  j["mode"] = prompt.mode == PromptMode::kProbabilistic ? "probabilistic" : "categorical";
  j["topic"] = prompt.topic;
  return j;
}

Prompt PromptFromJson(const Json& j) {
  using namespace fields;
  if (j.is_string()) return Prompt{PropositionId{j.get<std::string>()}, PromptMode::kCategorical, ""};
  Prompt prompt;
  prompt.proposition = PropositionId{ReqString(j, "proposition")};
  const std::string mode = OptString(j, "mode", "categorical");
  if (mode == "probabilistic") {
    prompt.mode = PromptMode::kProbabilistic;
  } else if (mode != "categorical") {
    Fail("unknown prompt mode '" + mode + "'");
  }
  prompt.topic = OptString(j, "topic", "");
  return prompt;
}

Json ToJson(const PredicateReport& report) {
  Json j = Json::object();
  j["predicate"] = report.predicate;
  j["holds"] = report.holds();
  j["checked"] = report.checked;
  j["violation_count"] = report.violations.size();
  j["rate"] = report.rate();
  Json v = Json::array();
  for (const auto& x : report.violations) {
    v.push_back(Json{{"statement", x.statement_id},
                     {"claim_index", x.claim_index},
                     {"proposition", x.proposition.value}});
  }
  j["violations"] = std::move(v);
  return j;
}

Json ToJson(const WorldPatch& patch) {
  Json truths = Json::object();
  for (const auto& [p, v] : patch.truths) truths[p.value] = v;
  Json freqs = Json::object();
  for (const auto& [p, f] : patch.frequencies) freqs[p.value] = f;
  return Json{{"truths", std::move(truths)}, {"frequencies", std::move(freqs)}};
}

WorldPatch WorldPatchFromJson(const Json& j) {
  using namespace fields;
  WorldPatch patch;
  if (const Json* t = Opt(j, "truths")) {
    for (const auto& [name, v] : Object(*t, "truths").items()) {
      patch.truths[PropositionId{name}] = Bool(v, name);
    }
  }
  if (const Json* f = Opt(j, "frequencies")) {
    for (const auto& [name, v] : Object(*f, "frequencies").items()) {
      patch.frequencies[PropositionId{name}] = Number(v, name);
    }
  }
  return patch;
}

}  // namespace truthstd
