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

#include "truthstd/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <sstream>
#include <variant>

#include "truthstd/adjudication.hpp"
#include "truthstd/amplification.hpp"
#include "truthstd/crypto.hpp"

#ifndef TRUTHSTD_VERSION
#define TRUTHSTD_VERSION "0.0.0"
#endif

namespace truthstd {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json ParseJson(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, what + ": " + e.what());
  }
}

std::string Fixed(double x, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << x;
  return out.str();
}

std::string Rate(const std::optional<double>& x) { return x ? Fixed(*x) : "undefined"; }

std::string YesNo(bool b) { return b ? "yes" : "no"; }

std::vector<const AgentSpec*> SelectAgents(const Scenario& s, const RunOptions& o) {
  std::vector<const AgentSpec*> out;
  if (o.system) {
    out.push_back(&s.FindAgent(*o.system));
  } else {
    for (const auto& a : s.agents) out.push_back(&a);
  }
  return out;
}

const AgentSpec& RequireSystem(const Scenario& s, const RunOptions& o, std::string_view sub) {
  if (!o.system) {
    throw Error(ErrorCode::kInvalidArgument, std::string(sub) + " needs --system");
  }
  return s.FindAgent(*o.system);
}

Registry FreshRegistry(const Scenario& s) {
  Registry reg;
  for (const auto& a : s.agents) reg.Register(a.id, a.developer, AgentKey(a).public_key);
  return reg;
}

// Answers every scenario prompt with a fresh agent. Streams are the same for
// simulate and adjudicate, so both see the same statements.
Agent Simulate(const Scenario& s, const AgentSpec& spec, std::uint64_t seed) {
  Agent a = s.BuildAgent(spec);
  Rng rng(SplitSeed(seed, "simulate/agent/" + spec.id));
  for (const auto& p : s.prompts) a.Step(p, s.world, rng, "simulate");
  return a;
}

void RunSimulate(const Scenario& s, const RunOptions& o, std::uint64_t seed, RunReport& r) {
  const EvaluationPipeline pipeline = s.Pipeline();
  Json agents = Json::array();
  std::ostringstream jsonl;
  r.summary.push_back("agent               statements declined negligent truthful honest undeluded");
  for (const AgentSpec* spec : SelectAgents(s, o)) {
    const Agent a = Simulate(s, *spec, seed);
    const KeyPair key = AgentKey(*spec);
    const Trace& trace = a.trace();
    std::size_t claims = 0;
    std::size_t negligent = 0;
    Json negligent_ids = Json::array();
    for (const auto& st : trace.statements) {
      claims += st.claims.size();
      const StatementAssessment as = pipeline.Assess(st, s.world);
      negligent += as.negligent_count;
      if (as.negligent()) negligent_ids.push_back(st.id);
      Json line = ToJson(SignStatement(key, st));
      line["reporter"] = s.actors.user;
      jsonl << line.dump() << '\n';
    }
    const std::size_t declined = s.prompts.size() - trace.statements.size();
    const PredicateReport truthful = CheckTruthful(trace, s.world);
    const PredicateReport honest = CheckHonest(trace);
    const PredicateReport undeluded = CheckUndeluded(a.beliefs(), s.world);
    agents.push_back(Json{{"id", spec->id},
                          {"prompts", s.prompts.size()},
                          {"statements", trace.statements.size()},
                          {"declined", declined},
                          {"claims", claims},
                          {"negligent", negligent},
                          {"negligent_statements", std::move(negligent_ids)},
                          {"truthful", ToJson(truthful)},
                          {"honest", ToJson(honest)},
                          {"undeluded", ToJson(undeluded)}});
    std::ostringstream line;
    line << spec->id << std::string(spec->id.size() < 20 ? 20 - spec->id.size() : 1, ' ')
         << trace.statements.size() << "  " << declined << "  " << negligent << "  "
         << YesNo(truthful.holds()) << "  " << YesNo(honest.holds()) << "  "
         << YesNo(undeluded.holds());
    r.summary.push_back(line.str());
  }
  r.suites["simulate"] = Json{{"agents", std::move(agents)}};
  r.statements_jsonl = jsonl.str();
}

struct ReportEvent {
  std::optional<SignedStatement> statement;
  std::string reporter;
  std::optional<WorldPatch> evidence;
};

std::vector<ReportEvent> ReadReports(const std::filesystem::path& path) {
  std::vector<ReportEvent> out;
  std::istringstream in(ReadFile(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(n);
    const Json j = ParseJson(line, where);
    ReportEvent ev;
    try {
      if (j.contains("evidence")) {
        ev.evidence = WorldPatchFromJson(j.at("evidence"));
      } else {
        ev.statement = SignedStatementFromJson(j);
        ev.reporter = j.value("reporter", std::string("user"));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSignatureInvalid) throw;
      throw Error(ErrorCode::kSchemaError, where + ": " + e.what());
    }
    out.push_back(std::move(ev));
  }
  return out;
}

void RunAdjudicate(const Scenario& s, const RunOptions& o, std::uint64_t seed, RunReport& r) {
  std::vector<ReportEvent> events;
  if (o.reports) {
    events = ReadReports(*o.reports);
  } else {
    for (const AgentSpec* spec : SelectAgents(s, o)) {
      const KeyPair key = AgentKey(*spec);
      const Agent agent = Simulate(s, *spec, seed);
      for (const auto& st : agent.trace().statements) {
        events.push_back(ReportEvent{SignStatement(key, st), s.actors.user, std::nullopt});
      }
    }
  }
  for (const auto& ev : events) {
    if (!ev.evidence) continue;
    for (const auto& [p, _] : ev.evidence->truths) {
      if (!s.world.Contains(p)) {
        throw Error(ErrorCode::kDanglingReference,
                    "evidence: undeclared proposition '" + p.value + "'");
      }
    }
  }

  const Registry registry = FreshRegistry(s);
  Adjudicator adj(registry, s.world, s.Tiers(), s.sanctions);
  std::vector<std::string> order;
  std::size_t rejected = 0;
  for (const auto& ev : events) {
    if (ev.evidence) {
      for (const auto& id : order) {
        if (adj.GetCase(id).status != CaseStatus::kClosed) continue;
        if (adj.Reevaluate(id, *ev.evidence).negligent) adj.Sanctions(id);
      }
      continue;
    }
    const Case* c = nullptr;
    try {
      c = &adj.OpenCase(*ev.statement, ev.reporter);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSignatureInvalid) throw;
      ++rejected;
      continue;
    }
    if (c->status != CaseStatus::kOpen) continue;
    const std::string id = c->case_id;
    order.push_back(id);
    adj.Run(id);
    adj.Sanctions(id);
  }

  const double full = adj.tiers().FullCost();
  double spent = 0.0;
  std::size_t negligent = 0;
  std::size_t provisional = 0;
  std::size_t tier_runs = 0;
  Json cases = Json::array();
  std::ostringstream history;
  for (const auto& id : order) {
    const Case& c = adj.GetCase(id);
    for (const auto& t : c.history) spent += t.cost;
    tier_runs += c.history.size();
    if (c.verdict->negligent) ++negligent;
    if (c.verdict->provisional) ++provisional;
    Json cj{{"case", c.case_id},
            {"statement", c.reported.statement.id},
            {"speaker", c.reported.statement.speaker},
            {"reporter", c.reporter},
            {"status", ToString(c.status)},
            {"evidence_version", c.evidence_version},
            {"tier_runs", c.history.size()},
            {"verdict", ToJson(*c.verdict)}};
    cj["sanction"] = c.sanction ? ToJson(*c.sanction) : Json(nullptr);
    cases.push_back(std::move(cj));
    history << ExportHistory(c);
  }
  Json reversals = Json::array();
  for (const auto& rv : adj.reversals()) {
    Json j{{"case", rv.case_id},
           {"statement", rv.statement_id},
           {"evidence_version", rv.evidence_version}};
    j["reversed"] = rv.reversed ? ToJson(*rv.reversed) : Json(nullptr);
    reversals.push_back(std::move(j));
  }
  Json referrals = Json::array();
  for (const auto& ref : adj.audit_referrals()) {
    referrals.push_back(Json{{"statement", ref.statement_id},
                             {"claimed_system", ref.claimed_system},
                             {"reporter", ref.reporter}});
  }
  // Every cascade run (first run plus one per re-evaluation) at full cost.
  std::size_t cascade_runs = 0;
  for (const auto& id : order) cascade_runs += adj.GetCase(id).evidence_version + 1;
  const double always_full = full * static_cast<double>(cascade_runs);
  r.suites["adjudicate"] = Json{{"counts",
                                 Json{{"reports", events.size()},
                                      {"cases", order.size()},
                                      {"negligent", negligent},
                                      {"provisional", provisional},
                                      {"tier_runs", tier_runs},
                                      {"signature_rejections", rejected},
                                      {"reversals", adj.reversals().size()}}},
                                {"cost", spent},
                                {"always_full_cost", always_full},
                                {"cases", std::move(cases)},
                                {"reversals", std::move(reversals)},
                                {"audit_referrals", std::move(referrals)}};
  r.history_jsonl = history.str();
  r.summary.push_back("cases " + std::to_string(order.size()) + ", negligent " +
                      std::to_string(negligent) + ", provisional " +
                      std::to_string(provisional) + ", reversals " +
                      std::to_string(adj.reversals().size()) + ", signature rejections " +
                      std::to_string(rejected));
  r.summary.push_back("cost " + Fixed(spent, 2) + " vs always-full " + Fixed(always_full, 2));
  if (rejected > 0) r.exit_code = kExitSignatureInvalid;
}

std::string ChooseLevel(const Scenario& s, const AgentSpec& spec, const RunOptions& o) {
  if (o.level) return *o.level;
  if (!spec.deployer.claimed_level.empty()) return spec.deployer.claimed_level;
  return s.certification.levels.front().level;
}

Json CertificationJson(const CertificationRun& run) {
  Json j = Json::object();
  if (run.results.average) j["average"] = ToJson(*run.results.average);
  if (run.results.worst) j["worst"] = ToJson(*run.results.worst);
  if (run.results.calibration) j["calibration"] = ToJson(*run.results.calibration);
  if (run.results.honesty) j["honesty"] = ToJson(*run.results.honesty);
  if (run.audit) j["audit"] = ToJson(*run.audit);
  Json skipped = Json::array();
  for (const auto& x : run.skipped) skipped.push_back(x);
  j["skipped"] = std::move(skipped);
  return j;
}

void RunCertify(const Scenario& s, const RunOptions& o, std::uint64_t seed, RunReport& r) {
  const AgentSpec& spec = RequireSystem(s, o, "certify");
  for (const auto& name : o.suites) {
    if (std::find(std::begin(kCertificationSuites), std::end(kCertificationSuites), name) ==
        std::end(kCertificationSuites)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + name + "'");
    }
  }
  Registry reg = o.registry ? RegistryFromJson(ParseJson(ReadFile(*o.registry), "registry"))
                            : FreshRegistry(s);
  const KeyPair key = AgentKey(spec);
  if (!reg.Contains(spec.id)) reg.Register(spec.id, spec.developer, key.public_key);

  const std::string level = ChooseLevel(s, spec, o);
  const CertificationThresholds& thresholds = s.Level(level);
  const CertificationRun run =
      RunCertification(s, spec, o.suites, thresholds, seed, reg.now(), o.parallel);

  Json suites = CertificationJson(run);
  Json decision{{"system", spec.id},
                {"level", level},
                {"thresholds", ToJson(thresholds)},
                {"policy_hash", PolicyHash(s.BuildAgent(spec))}};
  if (!run.outcome) throw Error(ErrorCode::kInvalidArgument, "no certification suite applies");
  if (const auto* cert = std::get_if<Certificate>(&*run.outcome)) {
    decision["certified"] = true;
    decision["certificate"] = ToJson(*cert);
    reg.RecordCertificate(*cert);
    if (spec.deployer.claims_certified) {
      reg.ClaimCertification(spec.id, level, DeployedPolicyHash(s, spec));
    }
    r.summary.push_back("certified '" + spec.id + "' at level '" + level + "' (" + cert->id() +
                        ")");
  } else {
    const auto& rej = std::get<Rejection>(*run.outcome);
    Json failing = Json::array();
    for (const auto& f : rej.failing_suites) failing.push_back(f);
    decision["certified"] = false;
    decision["failing_suites"] = failing;
    std::string names;
    for (const auto& f : rej.failing_suites) names += (names.empty() ? "" : ", ") + f;
    r.summary.push_back("rejected '" + spec.id + "' at level '" + level + "': " + names);
    r.exit_code = kExitCertificationRejected;
  }
  suites["decision"] = std::move(decision);

  if (run.results.average) {
    const MetricsReport& m = *run.results.average;
    r.summary.push_back("average: negligent " + std::to_string(m.negligent) + " / claims " +
                        std::to_string(m.claims) + " (per claim " + Rate(m.per_claim()) +
                        ", per word " + Rate(m.per_word()) + ", per question " +
                        Rate(m.per_question()) + ", per conversation " +
                        Rate(m.per_conversation()) + ")");
  }
  if (run.results.worst) {
    r.summary.push_back("worst: min accuracy " + Fixed(run.results.worst->min_accuracy) +
                        ", severity " + Fixed(run.results.worst->severity) + " after " +
                        std::to_string(run.results.worst->evaluations) + " evaluations");
  }
  if (run.results.calibration) {
    r.summary.push_back("calibration: " +
                        std::to_string(run.results.calibration->probabilistic_claims) +
                        " claims, max deviation " + Rate(run.results.calibration->max_deviation));
  }
  if (run.results.honesty) {
    r.summary.push_back("honesty: " + std::to_string(run.results.honesty->mismatches.size()) +
                        " mismatches / " + std::to_string(run.results.honesty->probed) +
                        " probes");
  }
  if (run.audit) {
    r.summary.push_back("audit: " + std::to_string(run.audit->conversations_audited) +
                        " conversations, ratio " + Rate(run.audit->ratio) + ", discrepancy " +
                        YesNo(run.audit->discrepancy));
  }
  for (const auto& x : run.skipped) r.summary.push_back("skipped: " + x);
  r.suites["certify"] = std::move(suites);
  r.registry = std::move(reg);
}

void RunAmplify(const Scenario& s, const RunOptions& o, std::uint64_t seed, RunReport& r) {
  const EvaluationPipeline pipeline = s.Pipeline();
  const RelevanceGraph graph = s.Graph();
  AmplificationSuiteConfig cfg;
  cfg.bound = s.amplification.bound;
  cfg.mode = s.amplification.mode;
  cfg.followups = s.amplification.followups;
  Json agents = Json::array();
  for (const AgentSpec* spec : SelectAgents(s, o)) {
    const AmplificationSuiteReport rep =
        WorstCaseAmplificationSuite(s.BuildAgent(*spec), s.prompts, s.amplification.budget,
                                    pipeline, s.world, graph, SplitSeed(seed, "amplify/" + spec->id),
                                    cfg);
    Json j = ToJson(rep);
    j["id"] = spec->id;
    agents.push_back(std::move(j));
    r.summary.push_back(spec->id + ": " + (rep.passed ? "pass" : "FAIL") + " (" +
                        std::to_string(rep.sampled) + " prompts, " +
                        std::to_string(rep.falsehoods) + " falsehoods, " +
                        std::to_string(rep.failures) + " failed dialogues)");
    if (!rep.passed) r.exit_code = kExitAmplificationFailed;
  }
  r.suites["amplify"] = Json{{"mode", ToString(cfg.mode)},
                             {"bound", cfg.bound},
                             {"budget", s.amplification.budget},
                             {"agents", std::move(agents)}};
}

SignedStatement ReadSignedStatement(const std::filesystem::path& path) {
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    // A whole JSON document or the first line of a JSONL file.
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error&) {
      j = ParseJson(ReadFile(path), path.string());
    }
    try {
      return SignedStatementFromJson(j);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
    }
  }
  throw Error(ErrorCode::kSchemaError, path.string() + ": no statement");
}

void RunVerify(const Scenario& s, const RunOptions& o, std::uint64_t seed, RunReport& r) {
  if (!o.system) throw Error(ErrorCode::kInvalidArgument, "verify needs --system");
  const std::string& system = *o.system;
  const Registry reg = o.registry ? RegistryFromJson(ParseJson(ReadFile(*o.registry), "registry"))
                                  : BuildRegistry(s, seed);
  SignedStatement signed_statement;
  if (o.statement) {
    signed_statement = ReadSignedStatement(*o.statement);
  } else {
    const AgentSpec& spec = s.FindAgent(system);
    Agent a = s.BuildAgent(spec);
    Rng rng(SplitSeed(seed, "verify/statement/" + spec.id));
    std::optional<Statement> st;
    for (const auto& p : s.prompts) {
      StepResult step = a.Step(p, s.world, rng, "verify");
      if (auto* x = std::get_if<Statement>(&step)) {
        st = std::move(*x);
        break;
      }
    }
    if (!st) throw Error(ErrorCode::kInvalidArgument, "'" + system + "' declined every prompt");
    signed_statement = SignStatement(AgentKey(spec), *st);
  }
  const CheckReport check = UserCheck(reg, signed_statement, system);
  Json j = ToJson(check);
  j["statement"] = signed_statement.statement.id;
  j["trusted"] = check.trusted();
  const RegistryEntry& entry = reg.Entry(system);
  if (!entry.deployer.deployed_policy_hash.empty()) {
    const DeploymentAudit audit =
        AuditDeployment(reg, system, entry.deployer.deployed_policy_hash);
    j["deployment_hash_matches"] = audit.hash_matches;
  }
  r.suites["verify"] = std::move(j);
  r.summary.push_back("(i)   deployed by '" + system + "': " + YesNo(check.deployed_by_system));
  r.summary.push_back("(ii)  deployer claims certification: " + YesNo(check.claims_certified));
  r.summary.push_back("(iii) certificate on record: " + YesNo(check.certificate_on_record));
  r.summary.push_back("(iv)  never revoked: " + YesNo(check.never_revoked));
  if (check.rotation_notice) r.summary.push_back("note: signed under an archived key");
  if (!check.trusted()) r.exit_code = kExitVerifyFailed;
}

}  // namespace

std::string_view ToString(Subcommand sub) {
  switch (sub) {
    case Subcommand::kSimulate: return "simulate";
    case Subcommand::kAdjudicate: return "adjudicate";
    case Subcommand::kCertify: return "certify";
    case Subcommand::kAmplify: return "amplify";
    case Subcommand::kVerify: return "verify";
  }
  return "simulate";
}

Subcommand SubcommandFromString(std::string_view name) {
  for (auto sub : {Subcommand::kSimulate, Subcommand::kAdjudicate, Subcommand::kCertify,
                   Subcommand::kAmplify, Subcommand::kVerify}) {
    if (ToString(sub) == name) return sub;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown subcommand '" + std::string(name) + "'");
}

int ExitCodeFor(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kSchemaError:
    case ErrorCode::kMalformedStatement: return kExitSchema;
    case ErrorCode::kDanglingReference: return kExitDanglingReference;
    case ErrorCode::kSignatureInvalid: return kExitSignatureInvalid;
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kBeliefAccessDenied: return kExitBeliefAccessDenied;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownSystem:
    case ErrorCode::kEmptyValidationSet: return kExitUsage;
    default: return kExitInternal;
  }
}

Json ToJson(const RunReport& report, bool with_timing) {
  Json j{{"engine_version", report.engine_version},
         {"scenario", report.scenario_name},
         {"scenario_hash", report.scenario_hash},
         {"seed", report.seed},
         {"subcommand", ToString(report.subcommand)},
         {"exit_code", report.exit_code},
         {"suites", report.suites}};
  if (with_timing) j["timing"] = Json{{"wall_seconds", report.wall_seconds}};
  return j;
}

std::string ScenarioFileHash(const std::filesystem::path& path) {
  return Sha256Hex(ReadFile(path));
}

KeyPair AgentKey(const AgentSpec& agent) { return KeyPair::FromSeed(agent.key_seed); }

std::string DeployedPolicyHash(const Scenario& scenario, const AgentSpec& agent) {
  if (agent.deployer.deployed_policy_hash) return *agent.deployer.deployed_policy_hash;
  return PolicyHash(scenario.BuildAgent(agent));
}

CertificationRun RunCertification(const Scenario& s, const AgentSpec& spec,
                                  const std::set<std::string>& suites,
                                  const CertificationThresholds& thresholds, std::uint64_t seed,
                                  std::uint64_t issued_at, bool parallel) {
  const Agent agent = s.BuildAgent(spec);
  const EvaluationPipeline pipeline = s.Pipeline();
  const RelevanceGraph graph = s.Graph();
  const bool explicit_request = !suites.empty();
  const auto wanted = [&](const std::string& name) {
    return !explicit_request || suites.count(name) != 0;
  };
  const auto stream = [&](const std::string& name) {
    return SplitSeed(seed, "certify/" + name + "/" + spec.id);
  };
  const auto policy = parallel ? std::launch::async : std::launch::deferred;
  const CertificationSpec& c = s.certification;

  CertificationRun run;
  std::future<MetricsReport> average;
  std::future<WorstCaseReport> worst;
  std::future<CalibrationReport> calibration;
  std::future<MismatchReport> honesty;

  if (wanted("average")) {
    if (c.validation.empty() && !explicit_request) {
      run.skipped.push_back("average (no validation conversations)");
    } else {
      average = std::async(policy, [&] {
        return AverageCaseMetrics(agent, c.validation, pipeline, s.world, stream("average"));
      });
    }
  }
  if (wanted("worst")) {
    if (s.prompts.empty() && !explicit_request) {
      run.skipped.push_back("worst (no prompts)");
    } else {
      worst = std::async(policy, [&] {
        return WorstCaseSearch(agent, s.prompts, c.worst_case_budget, pipeline, s.world, graph,
                               stream("worst"));
      });
    }
  }
  if (wanted("calibration")) {
    if (c.probabilistic_prompts.empty() && !explicit_request) {
      run.skipped.push_back("calibration (no probabilistic prompts)");
    } else {
      calibration = std::async(policy, [&] {
        return CalibrationCheck(agent, c.probabilistic_prompts, s.world, stream("calibration"),
                                c.calibration);
      });
    }
  }
  if (wanted("honesty")) {
    if (!spec.transparent && !explicit_request) {
      run.skipped.push_back("honesty (belief store not accessible)");
    } else {
      honesty = std::async(policy, [&] {
        return HonestyProbe(agent, s.prompts, s.world, stream("honesty"), spec.transparent);
      });
    }
  }

  if (average.valid()) run.results.average = average.get();
  if (worst.valid()) run.results.worst = worst.get();
  if (calibration.valid()) run.results.calibration = calibration.get();
  if (honesty.valid()) run.results.honesty = honesty.get();

  if (run.results.average && !c.deployment.empty()) {
    run.audit = PostDeploymentAudit(agent, c.deployment, c.n_first, *run.results.average,
                                    c.discrepancy_factor, pipeline, s.world, stream("audit"));
  }
  if (run.results.average || run.results.worst || run.results.calibration ||
      run.results.honesty) {
    CertificationRequest req;
    req.system_id = spec.id;
    req.public_key = AgentKey(spec).public_key;
    req.policy_hash = PolicyHash(agent);
    req.issued_at = issued_at;
    req.validity = c.validity;
    req.certificate_id =
        "cert:" + spec.id + ":" + thresholds.level + ":" + std::to_string(issued_at);
    run.outcome = Certify(run.results, thresholds, req);
  }
  return run;
}

Registry BuildRegistry(const Scenario& s, std::uint64_t seed) {
  Registry reg = FreshRegistry(s);
  for (const auto& spec : s.agents) {
    if (!spec.deployer.claims_certified) continue;
    const CertificationThresholds& level = s.Level(spec.deployer.claimed_level);
    const CertificationRun run = RunCertification(s, spec, {}, level, seed, reg.now(), true);
    if (run.outcome) {
      if (const auto* cert = std::get_if<Certificate>(&*run.outcome)) reg.RecordCertificate(*cert);
    }
    reg.ClaimCertification(spec.id, level.level, DeployedPolicyHash(s, spec));
  }
  std::vector<RevocationSpec> revocations = s.revocations;
  std::stable_sort(revocations.begin(), revocations.end(),
                   [](const auto& a, const auto& b) { return a.tick < b.tick; });
  for (const auto& rv : revocations) {
    reg.AdvanceTo(std::max(reg.now(), rv.tick));
    reg.Revoke(rv.system, rv.reason);
  }
  return reg;
}

RunReport Run(const Scenario& scenario, const std::string& scenario_hash,
              const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.engine_version = TRUTHSTD_VERSION;
  r.scenario_name = scenario.name;
  r.scenario_hash = scenario_hash;
  r.seed = options.seed.value_or(scenario.seed);
  r.subcommand = options.subcommand;
  switch (options.subcommand) {
    case Subcommand::kSimulate: RunSimulate(scenario, options, r.seed, r); break;
    case Subcommand::kAdjudicate: RunAdjudicate(scenario, options, r.seed, r); break;
    case Subcommand::kCertify: RunCertify(scenario, options, r.seed, r); break;
    case Subcommand::kAmplify: RunAmplify(scenario, options, r.seed, r); break;
    case Subcommand::kVerify: RunVerify(scenario, options, r.seed, r); break;
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace truthstd
