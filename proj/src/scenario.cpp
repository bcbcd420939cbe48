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

#include "truthstd/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json_fields.hpp"
#include "truthstd/error.hpp"

namespace truthstd {
namespace {

using namespace fields;

std::string Index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

template <typename T, typename Fn>
std::vector<T> ArrayOf(const Json& j, const std::string& path, Fn&& parse) {
  std::vector<T> out;
  const Json& arr = Array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(WithPath(Index(path, i), [&] { return parse(arr[i]); }));
  }
  return out;
}

template <typename T, typename Fn>
Json JsonArray(const std::vector<T>& items, Fn&& to_json) {
  Json arr = Json::array();
  for (const auto& x : items) arr.push_back(to_json(x));
  return arr;
}

WorldModel WorldFromJson(const Json& j) {
  WorldModel world;
  Object(j, "world");
  for (const auto& [name, v] : Object(Req(j, "truths"), "truths").items()) {
    world.Set(PropositionId{name}, Bool(v, "truths." + name));
  }
  if (const Json* f = Opt(j, "frequencies")) {
    for (const auto& [name, v] : Object(*f, "frequencies").items()) {
      const PropositionId p{name};
      if (!world.Contains(p)) {
        throw Error(ErrorCode::kDanglingReference,
                    "world.frequencies: proposition '" + name + "' has no declared truth");
      }
      world.SetFrequency(p, Number(v, "frequencies." + name));
    }
  }
  return world;
}

Json ToJson(const WorldModel& world) {
  Json truths = Json::object();
  for (const auto& [p, v] : world.truths()) truths[p.value] = v;
  Json freqs = Json::object();
  for (const auto& [p, f] : world.frequencies()) freqs[p.value] = f;
  return Json{{"truths", std::move(truths)}, {"frequencies", std::move(freqs)}};
}

EvaluatorsSpec EvaluatorsFromJson(const Json& j) {
  EvaluatorsSpec e;
  if (const Json* gt = Opt(j, "ground_truth")) {
    e.ground_truth = WithPath("ground_truth", [&] { return EvaluatorConfigFromJson(*gt); });
  }
  if (const Json* panel = Opt(j, "panel")) {
    e.panel = ArrayOf<EvaluatorConfig>(*panel, "panel", EvaluatorConfigFromJson);
    if (e.panel.empty()) Fail("panel: benchmark panel is empty");
  }
  if (const Json* agg = Opt(j, "aggregation")) {
    e.aggregation = WithPath("aggregation", [&] { return AggregationMethodFromJson(*agg); });
  }
  return e;
}

void EvaluatorsToJson(Json& j, const EvaluatorsSpec& e) {
  j["ground_truth"] = ToJson(e.ground_truth);
  j["panel"] = JsonArray(e.panel, [](const EvaluatorConfig& c) { return ToJson(c); });
  j["aggregation"] = ToJson(e.aggregation);
}

AgentSpec AgentFromJson(const Json& j) {
  AgentSpec a;
  a.id = ReqString(j, "id");
  if (a.id.empty()) Fail("id: agent id is empty");
  a.key_seed = OptString(j, "key_seed", a.id);
  a.developer = OptString(j, "developer", "developer");
  if (const Json* p = Opt(j, "policy")) {
    a.policy = WithPath("policy", [&] { return AgentPolicyFromJson(*p); });
  }
  if (const Json* c = Opt(j, "belief_confidence")) {
    for (const auto& [name, v] : Object(*c, "belief_confidence").items()) {
      const double x = Number(v, "belief_confidence." + name);
      if (!(x >= 0.0 && x <= 1.0)) Fail("belief_confidence." + name + ": outside [0,1]");
      a.belief_confidence[PropositionId{name}] = x;
    }
  }
  a.transparent = OptBool(j, "transparent", true);
  if (const Json* d = Opt(j, "deployer")) {
    a.deployer.claims_certified = OptBool(*d, "claims_certified", false);
    a.deployer.claimed_level = OptString(*d, "claimed_level", "");
    if (const Json* h = Opt(*d, "deployed_policy_hash")) {
      a.deployer.deployed_policy_hash = String(*h, "deployed_policy_hash");
    }
  }
  return a;
}

Json ToJson(const AgentSpec& a) {
  Json conf = Json::object();
  for (const auto& [p, c] : a.belief_confidence) conf[p.value] = c;
  Json deployer{{"claims_certified", a.deployer.claims_certified},
                {"claimed_level", a.deployer.claimed_level}};
  if (a.deployer.deployed_policy_hash) {
    deployer["deployed_policy_hash"] = *a.deployer.deployed_policy_hash;
  }
  return Json{{"id", a.id},
              {"key_seed", a.key_seed},
              {"developer", a.developer},
              {"policy", ToJson(a.policy)},
              {"belief_confidence", std::move(conf)},
              {"transparent", a.transparent},
              {"deployer", std::move(deployer)}};
}

TierSpec TierFromJson(const Json& j) {
  TierSpec t;
  t.name = ReqString(j, "name");
  t.cost = ReqNumber(j, "cost");
  if (const Json* b = Opt(j, "band")) {
    t.band = UncertaintyBand{ReqNumber(*b, "lo"), ReqNumber(*b, "hi")};
  }
  t.evaluators = EvaluatorsFromJson(j);
  return t;
}

Json ToJson(const TierSpec& t) {
  Json j{{"name", t.name}, {"cost", t.cost}};
  j["band"] = t.band ? Json{{"lo", t.band->lo}, {"hi", t.band->hi}} : Json(nullptr);
  EvaluatorsToJson(j, t.evaluators);
  return j;
}

SanctionPolicy SanctionsFromJson(const Json& j) {
  SanctionPolicy s;
  if (const Json* sched = Opt(j, "schedule")) {
    s.schedule.clear();
    for (const auto& knot : Array(*sched, "schedule")) {
      if (!knot.is_array() || knot.size() != 2) Fail("schedule: knots are [severity, penalty]");
      s.schedule.emplace_back(Number(knot[0], "severity"), Number(knot[1], "penalty"));
    }
  }
  s.revoke_threshold = OptNumber(j, "revoke_threshold", s.revoke_threshold);
  s.interim_fraction = OptNumber(j, "interim_fraction", s.interim_fraction);
  ValidateSanctionPolicy(s);
  return s;
}

Json ToJson(const SanctionPolicy& s) {
  Json sched = Json::array();
  for (const auto& [x, y] : s.schedule) sched.push_back(Json::array({x, y}));
  return Json{{"schedule", std::move(sched)},
              {"revoke_threshold", s.revoke_threshold},
              {"interim_fraction", s.interim_fraction}};
}

CertificationSpec CertificationFromJson(const Json& j) {
  CertificationSpec c;
  if (const Json* levels = Opt(j, "levels")) {
    c.levels = ArrayOf<CertificationThresholds>(*levels, "levels",
                                                CertificationThresholdsFromJson);
    if (c.levels.empty()) Fail("levels: no certification levels");
  }
  if (const Json* v = Opt(j, "validation")) {
    c.validation = ArrayOf<Conversation>(*v, "validation", ConversationFromJson);
  }
  if (const Json* d = Opt(j, "deployment")) {
    c.deployment = ArrayOf<Conversation>(*d, "deployment", ConversationFromJson);
  }
  if (const Json* p = Opt(j, "probabilistic_prompts")) {
    c.probabilistic_prompts = ArrayOf<Prompt>(*p, "probabilistic_prompts", PromptFromJson);
  }
  c.worst_case_budget = OptUint(j, "worst_case_budget", c.worst_case_budget);
  c.n_first = OptUint(j, "n_first", c.n_first);
  c.discrepancy_factor = OptNumber(j, "discrepancy_factor", c.discrepancy_factor);
  c.calibration.bucket_width = OptNumber(j, "bucket_width", c.calibration.bucket_width);
  c.calibration.n_min = OptUint(j, "n_min", c.calibration.n_min);
  c.validity = OptUint(j, "validity", c.validity);
  if (c.worst_case_budget == 0) Fail("worst_case_budget: must be > 0");
  if (c.n_first == 0) Fail("n_first: must be > 0");
  if (!(c.discrepancy_factor >= 1.0)) Fail("discrepancy_factor: must be >= 1");
  if (!(c.calibration.bucket_width > 0.0 && c.calibration.bucket_width <= 1.0)) {
    Fail("bucket_width: must lie in (0,1]");
  }
  if (c.validity == 0) Fail("validity: must be > 0");
  return c;
}

Json ToJson(const CertificationSpec& c) {
  return Json{
      {"levels",
       JsonArray(c.levels, [](const CertificationThresholds& t) { return ToJson(t); })},
      {"validation", JsonArray(c.validation, [](const Conversation& x) { return ToJson(x); })},
      {"deployment", JsonArray(c.deployment, [](const Conversation& x) { return ToJson(x); })},
      {"probabilistic_prompts",
       JsonArray(c.probabilistic_prompts, [](const Prompt& p) { return ToJson(p); })},
      {"worst_case_budget", c.worst_case_budget},
      {"n_first", c.n_first},
      {"discrepancy_factor", c.discrepancy_factor},
      {"bucket_width", c.calibration.bucket_width},
      {"n_min", c.calibration.n_min},
      {"validity", c.validity}};
}

AmplificationSpec AmplificationFromJson(const Json& j) {
  AmplificationSpec a;
  a.mode = FollowUpModeFromString(OptString(j, "mode", "deception_probe"));
  a.followups.k = OptUint(j, "k", a.followups.k);
  a.followups.stricter_threshold =
      OptNumber(j, "stricter_threshold", a.followups.stricter_threshold);
  a.bound = OptUint(j, "bound", a.bound);
  a.budget = OptUint(j, "budget", a.budget);
  if (a.budget == 0) Fail("budget: must be > 0");
  return a;
}

Json ToJson(const AmplificationSpec& a) {
  return Json{{"mode", ToString(a.mode)},
              {"k", a.followups.k},
              {"stricter_threshold", a.followups.stricter_threshold},
              {"bound", a.bound},
              {"budget", a.budget}};
}

[[noreturn]] void Dangling(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kDanglingReference, where + ": undeclared " + what);
}

void CheckProposition(const Scenario& s, const PropositionId& p, const std::string& where) {
  if (!s.world.Contains(p)) Dangling(where, "proposition '" + p.value + "'");
}

void CheckClaim(const Scenario& s, const Claim& c, const std::string& where) {
  if (c.is_ambiguous()) {
    const auto& ref = std::get<AmbiguousRef>(c.target);
    if (!s.interpretations.Find(ref)) Dangling(where, "ambiguous reference '" + ref.value + "'");
  } else {
    CheckProposition(s, c.proposition(), where);
  }
}

void CheckPrompts(const Scenario& s, const std::vector<Prompt>& prompts, const std::string& where) {
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    CheckProposition(s, prompts[i].proposition, Index(where, i));
  }
}

void CheckConversations(const Scenario& s, const std::vector<Conversation>& convs,
                        const std::string& where) {
  for (std::size_t i = 0; i < convs.size(); ++i) {
    CheckPrompts(s, convs[i].prompts, Index(where, i) + ".prompts");
  }
}

void CheckEvaluator(const Scenario& s, const EvaluatorConfig& e, const std::string& where) {
  for (const auto& [p, _] : e.bias_profile) CheckProposition(s, p, where + ".bias_profile");
}

void CheckEvaluators(const Scenario& s, const EvaluatorsSpec& e, const std::string& where) {
  CheckEvaluator(s, e.ground_truth, where + ".ground_truth");
  for (std::size_t i = 0; i < e.panel.size(); ++i) {
    CheckEvaluator(s, e.panel[i], Index(where + ".panel", i));
  }
}

}  // namespace

const AgentSpec& Scenario::FindAgent(const std::string& id) const {
  for (const auto& a : agents) {
    if (a.id == id) return a;
  }
  throw Error(ErrorCode::kUnknownSystem, "scenario has no agent '" + id + "'");
}

Agent Scenario::BuildAgent(const AgentSpec& spec) const {
  return Agent::FromWorld(spec.id, spec.policy, world, spec.belief_confidence);
}

RelevanceGraph Scenario::Graph() const {
  RelevanceGraph g;
  for (const auto& l : relevance) g.Link(l.from, l.to, l.same_truth);
  return g;
}

namespace {

EvaluationPipeline MakePipeline(const Scenario& s, const EvaluatorsSpec& e) {
  EvaluationPipeline p;
  p.ground_truth = Evaluator::FromConfig(e.ground_truth);
  p.benchmark_panel.clear();
  for (const auto& c : e.panel) p.benchmark_panel.push_back(Evaluator::FromConfig(c));
  p.aggregation = e.aggregation;
  p.interpretations = s.interpretations;
  p.negligence = s.negligence;
  p.severity = s.severity;
  return p;
}

}  // namespace

EvaluationPipeline Scenario::Pipeline() const { return MakePipeline(*this, evaluators); }

TierConfig Scenario::Tiers() const {
  std::vector<Tier> out;
  if (tiers.empty()) {
    out.push_back(Tier{"default", Pipeline(), 1.0, std::nullopt});
  } else {
    for (const auto& t : tiers) {
      out.push_back(Tier{t.name, MakePipeline(*this, t.evaluators), t.cost, t.band});
    }
  }
  return TierConfig(std::move(out));
}

const CertificationThresholds& Scenario::Level(const std::string& name) const {
  for (const auto& l : certification.levels) {
    if (l.level == name) return l;
  }
  throw Error(ErrorCode::kDanglingReference, "undeclared certification level '" + name + "'");
}

void ValidateScenario(const Scenario& s) {
  for (const auto& [ref, readings] : s.interpretations.entries()) {
    for (const auto& r : readings) {
      CheckProposition(s, r.proposition, "interpretations." + ref.value);
    }
  }
  for (std::size_t i = 0; i < s.relevance.size(); ++i) {
    CheckProposition(s, s.relevance[i].from, Index("relevance", i) + ".from");
    CheckProposition(s, s.relevance[i].to, Index("relevance", i) + ".to");
    if (s.relevance[i].from == s.relevance[i].to) {
      Fail(Index("relevance", i) + ": self-link on '" + s.relevance[i].from.value + "'");
    }
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const AgentSpec& a = s.agents[i];
    const std::string where = Index("agents", i);
    if (!ids.insert(a.id).second) Fail(where + ": duplicate agent id '" + a.id + "'");
    for (const auto& p : a.policy.delusion_map) CheckProposition(s, p, where + ".policy.delusion_map");
    for (const auto& p : a.policy.lie_triggers) CheckProposition(s, p, where + ".policy.lie_triggers");
    for (const auto& [p, _] : a.policy.payoffs) CheckProposition(s, p, where + ".policy.payoffs");
    for (std::size_t k = 0; k < a.policy.padding.size(); ++k) {
      CheckClaim(s, a.policy.padding[k], Index(where + ".policy.padding", k));
    }
    for (const auto& [p, _] : a.belief_confidence) {
      CheckProposition(s, p, where + ".belief_confidence");
    }
    if (a.deployer.claims_certified) {
      bool found = false;
      for (const auto& l : s.certification.levels) found = found || l.level == a.deployer.claimed_level;
      if (!found) {
        Dangling(where + ".deployer.claimed_level",
                 "certification level '" + a.deployer.claimed_level + "'");
      }
    }
  }
  CheckEvaluators(s, s.evaluators, "evaluators");
  for (std::size_t i = 0; i < s.tiers.size(); ++i) {
    CheckEvaluators(s, s.tiers[i].evaluators, Index("tiers", i));
  }
  try {
    ValidateNegligenceConfig(s.negligence);
  } catch (const Error& e) {
    Fail(std::string("negligence: ") + e.what());
  }
  if (!(s.severity.exponent >= 1.0)) Fail("severity.exponent: must be >= 1");
  std::set<std::string> levels;
  for (const auto& l : s.certification.levels) {
    if (!levels.insert(l.level).second) Fail("certification.levels: duplicate '" + l.level + "'");
  }
  CheckConversations(s, s.certification.validation, "certification.validation");
  CheckConversations(s, s.certification.deployment, "certification.deployment");
  CheckPrompts(s, s.certification.probabilistic_prompts, "certification.probabilistic_prompts");
  CheckPrompts(s, s.prompts, "prompts");
  for (std::size_t i = 0; i < s.revocations.size(); ++i) {
    if (!ids.count(s.revocations[i].system)) {
      Dangling(Index("revocations", i) + ".system", "agent '" + s.revocations[i].system + "'");
    }
  }
  try {
    s.Tiers();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidArgument) throw;
    Fail(std::string("tiers: ") + e.what());
  }
}

Scenario ScenarioFromJson(const Json& j) {
  Scenario s;
  Object(j, "scenario");
  s.name = OptString(j, "name", "scenario");
  s.seed = ReqUint(j, "seed");
  s.world = WithPath("world", [&] { return WorldFromJson(Req(j, "world")); });
  if (const Json* t = Opt(j, "interpretations")) {
    s.interpretations = WithPath("interpretations", [&] { return InterpretationTableFromJson(*t); });
  }
  if (const Json* r = Opt(j, "relevance")) {
    s.relevance = ArrayOf<LinkSpec>(*r, "relevance", [](const Json& l) {
      return LinkSpec{PropositionId{ReqString(l, "from")}, PropositionId{ReqString(l, "to")},
                      OptBool(l, "same_truth", true)};
    });
  }
  if (const Json* a = Opt(j, "agents")) s.agents = ArrayOf<AgentSpec>(*a, "agents", AgentFromJson);
  if (const Json* e = Opt(j, "evaluators")) {
    s.evaluators = WithPath("evaluators", [&] { return EvaluatorsFromJson(*e); });
  }
  if (const Json* n = Opt(j, "negligence")) {
    s.negligence.threshold = WithPath("negligence", [&] {
      return OptNumber(*n, "threshold", s.negligence.threshold);
    });
    s.negligence.unconfident_discount = WithPath("negligence", [&] {
      return OptNumber(*n, "unconfident_discount", s.negligence.unconfident_discount);
    });
  }
  if (const Json* v = Opt(j, "severity")) {
    s.severity.exponent =
        WithPath("severity", [&] { return OptNumber(*v, "exponent", s.severity.exponent); });
  }
  if (const Json* t = Opt(j, "tiers")) s.tiers = ArrayOf<TierSpec>(*t, "tiers", TierFromJson);
  if (const Json* x = Opt(j, "sanctions")) {
    s.sanctions = WithPath("sanctions", [&] { return SanctionsFromJson(*x); });
  }
  if (const Json* c = Opt(j, "certification")) {
    s.certification = WithPath("certification", [&] { return CertificationFromJson(*c); });
  }
  if (const Json* a = Opt(j, "amplification")) {
    s.amplification = WithPath("amplification", [&] { return AmplificationFromJson(*a); });
  }
  if (const Json* p = Opt(j, "prompts")) s.prompts = ArrayOf<Prompt>(*p, "prompts", PromptFromJson);
  if (const Json* r = Opt(j, "revocations")) {
    s.revocations = ArrayOf<RevocationSpec>(*r, "revocations", [](const Json& x) {
      return RevocationSpec{ReqString(x, "system"), OptUint(x, "tick", 0),
                            OptString(x, "reason", "")};
    });
  }
  if (const Json* a = Opt(j, "actors")) {
    WithPath("actors", [&] {
      s.actors.developer = OptString(*a, "developer", s.actors.developer);
      s.actors.certifier = OptString(*a, "certifier", s.actors.certifier);
      s.actors.principal = OptString(*a, "principal", s.actors.principal);
      s.actors.user = OptString(*a, "user", s.actors.user);
      s.actors.adjudicator = OptString(*a, "adjudicator", s.actors.adjudicator);
      return 0;
    });
  }
  ValidateScenario(s);
  return s;
}

Json ToJson(const Scenario& s) {
  Json evaluators = Json::object();
  EvaluatorsToJson(evaluators, s.evaluators);
  return Json{
      {"name", s.name},
      {"seed", s.seed},
      {"world", ToJson(s.world)},
      {"interpretations", ToJson(s.interpretations)},
      {"relevance", JsonArray(s.relevance,
                              [](const LinkSpec& l) {
                                return Json{{"from", l.from.value},
                                            {"to", l.to.value},
                                            {"same_truth", l.same_truth}};
                              })},
      {"agents", JsonArray(s.agents, [](const AgentSpec& a) { return ToJson(a); })},
      {"evaluators", std::move(evaluators)},
      {"negligence", Json{{"threshold", s.negligence.threshold},
                          {"unconfident_discount", s.negligence.unconfident_discount}}},
      {"severity", Json{{"exponent", s.severity.exponent}}},
      {"tiers", JsonArray(s.tiers, [](const TierSpec& t) { return ToJson(t); })},
      {"sanctions", ToJson(s.sanctions)},
      {"certification", ToJson(s.certification)},
      {"amplification", ToJson(s.amplification)},
      {"prompts", JsonArray(s.prompts, [](const Prompt& p) { return ToJson(p); })},
      {"revocations", JsonArray(s.revocations,
                                [](const RevocationSpec& r) {
                                  return Json{{"system", r.system},
                                              {"tick", r.tick},
                                              {"reason", r.reason}};
                                })},
      {"actors", Json{{"developer", s.actors.developer},
                      {"certifier", s.actors.certifier},
                      {"principal", s.actors.principal},
                      {"user", s.actors.user},
                      {"adjudicator", s.actors.adjudicator}}}};
}

Scenario ParseScenario(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw Error(ErrorCode::kSchemaError,
                "line " + std::to_string(line) + ": " + std::string(e.what()));
  }
  return ScenarioFromJson(j);
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read scenario '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str());
}

std::filesystem::path ResolveScenarioPath(const std::string& path) {
  std::filesystem::path p(path);
  if (std::filesystem::exists(p) || p.is_absolute()) return p;
  if (const char* dir = std::getenv(std::string(kScenarioDirEnv).c_str())) {
    std::filesystem::path candidate = std::filesystem::path(dir) / p;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return p;
}

}  // namespace truthstd
