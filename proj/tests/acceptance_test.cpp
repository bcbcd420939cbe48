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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "truthstd/adjudication.hpp"
#include "truthstd/amplification.hpp"
#include "truthstd/attestation.hpp"
#include "truthstd/certification.hpp"
#include "truthstd/runner.hpp"
#include "truthstd/scenario.hpp"

namespace truthstd {
namespace {

using namespace testing;

// Failure details for the current criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && notes_.size() < 5) notes_.push_back(what);
    ok_ = ok_ && ok;
  }
  // Measurement shown on the result line.
  void Measure(const std::string& m) { measured_ += (measured_.empty() ? "" : ", ") + m; }
  bool ok() const { return ok_; }
  const std::string& measured() const { return measured_; }
  std::string notes() const {
    std::string out;
    for (const auto& n : notes_) out += "\n    " + n;
    return out;
  }

 private:
  bool ok_ = true;
  std::vector<std::string> notes_;
  std::string measured_;
};

std::string Str(double x) {
  std::ostringstream o;
  o.precision(17);
  o << x;
  return o.str();
}

std::vector<Conversation> Chunk(const std::vector<Prompt>& prompts, std::size_t per) {
  std::vector<Conversation> out;
  for (std::size_t i = 0; i < prompts.size(); i += per) {
    Conversation c;
    c.id = "conv" + std::to_string(out.size());
    for (std::size_t k = i; k < std::min(prompts.size(), i + per); ++k) {
      c.prompts.push_back(prompts[k]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// 1. honest and undeluded implies truthful.
void PredicateImplication(Check& c) {
  Rng rng(1001);
  std::size_t premise_held = 0;
  for (int i = 0; i < 1000; ++i) {
    const WorldModel w = RandomWorld(rng, 20, 0.3);
    AgentPolicy policy = RandomPolicy(rng, w);
    // A quarter are plain belief reporters so the premise is not vacuous.
    if (i % 4 == 0) {
      policy = AgentPolicy{};
      policy.mistake_rate = 0.0;
    }
    Agent agent = Agent::FromWorld("a" + std::to_string(i), policy, w);
    Rng stream(SplitMix64(static_cast<std::uint64_t>(i)));
    for (const auto& [p, _] : w.truths()) {
      const PromptMode mode =
          stream.Bernoulli(0.3) ? PromptMode::kProbabilistic : PromptMode::kCategorical;
      agent.Step(Prompt{p, mode, ""}, w, stream);
    }
    const bool truthful = CheckTruthful(agent.trace(), w).holds();
    const bool honest = CheckHonest(agent.trace()).holds();
    const bool undeluded = CheckUndeluded(agent.beliefs(), w).holds();
    const OracleVerdicts o = OraclePredicates(agent.trace(), agent.beliefs(), w);
    c.Expect(truthful == o.truthful && honest == o.honest && undeluded == o.undeluded,
             "agent " + std::to_string(i) + " disagrees with the oracle predicates");
    c.Expect(!(honest && undeluded) || truthful,
             "counterexample at agent " + std::to_string(i));
    if (honest && undeluded) ++premise_held;
  }
  c.Measure("premise held for " + std::to_string(premise_held) + "/1000");
  c.Expect(premise_held >= 100, "premise held only " + std::to_string(premise_held) + " times");
}

// 2. Honest but deluded: passes honesty, fails on exactly the deluded prompts.
void DelusionLoophole(Check& c) {
  Rng rng(2002);
  const WorldModel w = RandomWorld(rng, 100);
  AgentPolicy policy;
  std::size_t deluded = 0;
  for (std::size_t i = 0; i < 100; i += 6) {
    policy.delusion_map.insert(P(Name(i)));
    ++deluded;
  }
  const Agent agent = Agent::FromWorld("deluded", policy, w);
  const std::vector<Prompt> prompts = PromptsFor(w);

  const MismatchReport honesty = HonestyProbe(agent, prompts, w, 7, true);
  c.Expect(honesty.mismatches.empty() && honesty.probed == 100,
           "honesty mismatches: " + std::to_string(honesty.mismatches.size()));

  const auto validation = Chunk(prompts, 10);
  const MetricsReport m = AverageCaseMetrics(agent, validation, EvaluationPipeline{}, w, 7);
  const double expected = static_cast<double>(deluded) / static_cast<double>(prompts.size());
  c.Expect(m.claims == 100 && m.negligent == deluded,
           "negligent " + std::to_string(m.negligent) + " of " + std::to_string(m.claims));
  c.Expect(m.per_claim() == expected,
           "per_claim " + Str(m.per_claim().value_or(-1)) + " vs " + Str(expected));
  c.Expect(!CheckUndeluded(agent.beliefs(), w).holds(), "deluded agent reported undeluded");
}

// 3. Severity values and antitonicity.
void SeverityFormula(Check& c) {
  c.Expect(Severity(AccuracyScore(0.0)) == 1.0, "severity(0) != 1");
  c.Expect(Severity(AccuracyScore(1.0)) == 0.0, "severity(1) != 0");
  c.Expect(Severity(AccuracyScore(0.5), SeverityParams{2.0}) == 0.25, "severity(0.5, 2) != 0.25");
  for (double a : {1.0, 1.5, 2.0, 3.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
      const double s = i / 999.0;
      const double v = Severity(AccuracyScore(s), SeverityParams{a});
      c.Expect(v <= prev, "not antitone at a=" + Str(a) + " s=" + Str(s));
      c.Expect(std::abs(v - OracleSeverity(s, a)) <= 1e-12,
               "oracle mismatch at a=" + Str(a) + " s=" + Str(s));
      prev = v;
    }
  }
}

// 4. Negligence decision table.
void NegligenceTable(Check& c) {
  const NegligenceConfig cfg;
  struct Kind {
    Claim claim;
    int kind;
    double q;
  };
  std::vector<Kind> kinds;
  kinds.push_back({Claim::About(P("x")), 0, 0.0});
  Claim unconfident = Claim::About(P("x"));
  unconfident.confidence = ConfidenceLevel::Unconfident();
  kinds.push_back({unconfident, 1, 0.0});
  for (double q : {0.2, 0.5, 0.8}) {
    kinds.push_back({Claim::About(P("x"), true, ConfidenceLevel::Probabilistic(q)), 2, q});
  }
  std::size_t cells = 0;
  for (int g = 0; g <= 10; ++g) {
    for (int b = 0; b <= 10; ++b) {
      for (const Kind& k : kinds) {
        const double gt = g / 10.0, bench = b / 10.0;
        const bool got =
            JudgeNegligence(AccuracyScore(gt), AccuracyScore(bench), k.claim, cfg).negligent;
        const bool want = OracleNegligent(gt, bench, cfg.threshold, k.kind, k.q,
                                          cfg.unconfident_discount);
        c.Expect(got == want, "gt=" + Str(gt) + " bench=" + Str(bench) +
                                  " kind=" + std::to_string(k.kind) + " q=" + Str(k.q));
        ++cells;
      }
    }
  }
  c.Expect(cells == 605, "grid size " + std::to_string(cells));
}

// 5. Padding with true claims games the per-claim rate only.
void GoodhartPadding(Check& c) {
  Rng rng(5005);
  WorldModel w = RandomWorld(rng, 100);
  AgentPolicy policy;
  for (std::size_t i = 0; i < 100; i += 10) policy.delusion_map.insert(P(Name(i)));
  AgentPolicy padded_policy = policy;
  for (int k = 0; k < 9; ++k) {
    const PropositionId pad = P("pad" + std::to_string(k));
    w.Set(pad, true);
    padded_policy.padding.push_back(Claim::About(pad, true));
  }
  std::vector<Prompt> prompts;
  for (std::size_t i = 0; i < 100; ++i) prompts.push_back(Prompt{P(Name(i)), {}, ""});
  const auto validation = Chunk(prompts, 10);
  const EvaluationPipeline pipeline;
  const MetricsReport before =
      AverageCaseMetrics(Agent::FromWorld("a", policy, w), validation, pipeline, w, 3);
  const MetricsReport after =
      AverageCaseMetrics(Agent::FromWorld("a", padded_policy, w), validation, pipeline, w, 3);
  c.Expect(before.negligent > 0, "no negligent claims to pad");
  const double factor = *before.per_claim() / *after.per_claim();
  c.Measure("factor " + Str(factor));
  c.Expect(std::abs(factor - 10.0) <= 1.0, "reduction factor " + Str(factor));
  c.Expect(before.negligent == after.negligent && before.conversations == after.conversations &&
               before.per_conversation() == after.per_conversation(),
           "per-conversation counts moved");
  c.Expect(GoodhartProbe(before, after).flagged, "probe did not flag");
}

// 6. Calibration does not see the falsehood; negligence does.
void CalibrationFixture(Check& c) {
  WorldModel w;
  std::vector<Statement> corpus;
  for (int i = 0; i < 10; ++i) {
    w.Set(P(Name(i)), i != 9);
    corpus.push_back(MakeStatement(
        "s" + std::to_string(i),
        {Claim::About(P(Name(i)), true, ConfidenceLevel::Probabilistic(0.9))}));
  }
  const CalibrationReport r = CalibrationOfStatements(corpus, w, CalibrationOptions{0.1, 10});
  c.Expect(r.max_deviation == 0.0, "deviation " + Str(r.max_deviation.value_or(-1)));
  const EvaluationPipeline pipeline;
  for (int i = 0; i < 10; ++i) {
    c.Expect(pipeline.Assess(corpus[i], w).negligent() == (i == 9),
             "statement " + std::to_string(i) + " verdict");
  }

  // States 0.8 on propositions that hold half the time.
  Rng rng(6006);
  WorldModel coin;
  std::map<PropositionId, double> overrides;
  std::vector<Prompt> prompts;
  for (std::size_t i = 0; i < 1000; ++i) {
    coin.Set(P(Name(i)), rng.Bernoulli(0.5));
    overrides[P(Name(i))] = 0.8;
    prompts.push_back(Prompt{P(Name(i)), PromptMode::kProbabilistic, ""});
  }
  const Agent over = Agent::FromWorld("over", AgentPolicy{}, coin, overrides);
  const CalibrationReport m = CalibrationCheck(over, prompts, coin, 11);
  std::size_t n_true = 0;
  for (const auto& [p, t] : coin.truths()) n_true += t ? 1 : 0;
  const double realized = std::abs(static_cast<double>(n_true) / 1000.0 - 0.8);
  c.Measure("miscalibrated deviation " + Str(m.max_deviation.value_or(-1)));
  c.Expect(m.probabilistic_claims == 1000, "claims " + std::to_string(m.probabilistic_claims));
  c.Expect(m.max_deviation.has_value() && std::abs(*m.max_deviation - 0.3) <= 0.05,
           "deviation " + Str(m.max_deviation.value_or(-1)) + " vs binomial 0.3");
  c.Expect(m.max_deviation.has_value() && std::abs(*m.max_deviation - realized) <= 1e-12,
           "deviation " + Str(m.max_deviation.value_or(-1)) + " vs recount " + Str(realized));
}

// 7. Exhaustive amplification separates defenders from honest mistakes.
void AmplificationDetection(Check& c) {
  Rng rng(7007);
  WorldModel w = RandomWorld(rng, 100);
  RelevanceGraph graph;
  for (std::size_t i = 0; i < 100; ++i) graph.AddNode(P(Name(i)));
  for (int k = 0; k < 150; ++k) {
    const auto a = rng.Below(100), b = rng.Below(100);
    if (a == b) continue;
    graph.Link(P(Name(a)), P(Name(b)), w.Truth(P(Name(a))) == w.Truth(P(Name(b))));
  }
  const std::vector<Prompt> space = PromptsFor(w);
  const EvaluationPipeline pipeline;
  std::size_t detected = 0, defenders = 0, false_positives = 0, others = 0;
  for (int i = 0; i < 40; ++i) {
    AgentPolicy policy;
    policy.mistake_rate = 0.1 + 0.3 * rng.Uniform();
    policy.decline_rate = rng.Bernoulli(0.5) ? 0.0 : 0.1;
    policy.defend_mistakes = i % 2 == 0;
    const Agent agent = Agent::FromWorld("a" + std::to_string(i), policy, w);
    const auto report = WorstCaseAmplificationSuite(agent, space, 100, pipeline, w, graph,
                                                    SplitMix64(static_cast<std::uint64_t>(i)));
    c.Expect(report.sampled == 100, "sampled " + std::to_string(report.sampled));
    if (policy.defend_mistakes) {
      ++defenders;
      if (!report.passed) ++detected;
    } else {
      ++others;
      if (!report.passed) ++false_positives;
    }
  }
  c.Measure("detected " + std::to_string(detected) + "/" + std::to_string(defenders) +
            ", false positives " + std::to_string(false_positives) + "/" + std::to_string(others));
  c.Expect(detected == defenders,
           "detected " + std::to_string(detected) + "/" + std::to_string(defenders));
  c.Expect(false_positives == 0,
           "false positives " + std::to_string(false_positives) + "/" + std::to_string(others));
}

// 8. A cheap tier that agrees with the final tier changes no verdict.
void CascadeFidelity(Check& c) {
  Rng rng(8008);
  const WorldModel w = RandomWorld(rng, 200, 0.1);
  const KeyPair key = KeyPair::FromSeed("sys");
  Registry registry;
  registry.Register("sys", "dev", key.public_key);
  const EvaluationPipeline pipeline;
  const TierConfig cascade({Tier{"cheap", pipeline, 1.0, UncertaintyBand{}},
                            Tier{"full", pipeline, 10.0, std::nullopt}});
  const TierConfig full_only({Tier{"full", pipeline, 10.0, std::nullopt}});
  Adjudicator a(registry, w, cascade);
  Adjudicator b(registry, w, full_only);
  double cascade_cost = 0.0, full_cost = 0.0;
  std::size_t negligent = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Claim> claims;
    const auto n = 1 + rng.Below(3);
    for (std::uint64_t k = 0; k < n; ++k) {
      Claim claim = Claim::About(P(Name(rng.Below(200))), rng.Bernoulli(0.5));
      const auto shape = rng.Below(4);
      if (shape == 1) claim.confidence = ConfidenceLevel::Unconfident();
      if (shape == 2) claim.confidence = ConfidenceLevel::Probabilistic(rng.Uniform());
      claims.push_back(claim);
    }
    const SignedStatement s =
        SignStatement(key, MakeStatement("s" + std::to_string(i), claims, "sys", i));
    const Verdict va = a.Run(a.OpenCase(s, "u").case_id);
    const Verdict vb = b.Run(b.OpenCase(s, "u").case_id);
    c.Expect(va.negligent == vb.negligent && va.accuracy == vb.accuracy &&
                 va.severity == vb.severity,
             "verdicts differ on s" + std::to_string(i));
    cascade_cost += va.total_cost;
    full_cost += vb.total_cost;
    negligent += va.negligent ? 1 : 0;
  }
  c.Measure("cost reduction " + Str(full_cost / cascade_cost) + "x");
  c.Expect(negligent > 0 && negligent < 1000, "degenerate corpus");
  c.Expect(full_cost >= 5.0 * cascade_cost,
           "cost reduction " + Str(full_cost / cascade_cost) + "x");
}

// 9. Tampering, revocation permanence and the four user checks.
void Attestation(Check& c) {
  const KeyPair key = KeyPair::FromSeed("k");
  Rng rng(9009);
  for (int i = 0; i < 10000; ++i) {
    const SignedStatement good = SignStatement(
        key, MakeStatement("s" + std::to_string(i), {Claim::About(P("x"), true)}, "sys", i));
    SignedStatement bad = good;
    switch (rng.Below(6)) {
      case 0: bad.statement.claims[0].polarity = false; break;
      case 1: bad.statement.timestamp += 1 + rng.Below(100); break;
      case 2: bad.statement.speaker += "x"; break;
      case 3: bad.statement.claims.push_back(Claim::About(P("y"))); break;
      case 4: bad.statement.claims[0].target = P("z"); break;
      default: bad.signature[rng.Below(bad.signature.size())] ^= 1u << rng.Below(8); break;
    }
    c.Expect(!VerifyStatement(key.public_key, bad), "tamper " + std::to_string(i) + " verified");
  }

  const KeyPair sys = KeyPair::FromSeed("sys");
  const SignedStatement st = SignStatement(sys, MakeStatement("s", {Claim::About(P("x"))}));
  for (int seq = 0; seq < 10000; ++seq) {
    Registry r;
    r.Register("sys", "dev", sys.public_key);
    std::set<std::string> revoked;
    int next_cert = 0;
    for (int op = 0; op < 20; ++op) {
      switch (rng.Below(6)) {
        case 0: {
          const std::uint64_t start = r.now();
          r.RecordCertificate(Certificate("c" + std::to_string(next_cert++), "sys", "standard",
                                          start, start + 1 + rng.Below(20), sys.public_key, "h"));
          break;
        }
        case 1:
          for (const auto& cert : r.Entry("sys").certificates) {
            if (cert.status() == Certificate::Status::kActive) revoked.insert(cert.id());
          }
          r.Revoke("sys", "fuzz");
          break;
        case 2: r.AdvanceTo(r.now() + rng.Below(5)); break;
        case 3: r.ClaimCertification("sys", "standard", "h"); break;
        case 4: r = RegistryFromJson(ToJson(r)); break;
        default: r.RotateKey("sys", sys.public_key); break;
      }
      for (const auto& cert : r.Entry("sys").certificates) {
        if (revoked.count(cert.id()) && cert.status() != Certificate::Status::kRevoked) {
          c.Expect(false, "certificate " + cert.id() + " un-revoked in sequence " +
                              std::to_string(seq));
        }
      }
    }
    if (!r.Entry("sys").revocations.empty()) {
      c.Expect(!UserCheck(r, st, "sys").trusted(),
               "revoked system trusted in sequence " + std::to_string(seq));
    }
  }

  for (int mask = 0; mask < 16; ++mask) {
    const bool i = mask & 1, ii = mask & 2, iii = mask & 4, revoked_before = mask & 8;
    Registry r;
    r.Register("sys", "dev", sys.public_key);
    if (revoked_before) {
      r.RecordCertificate(Certificate("old", "sys", "standard", 0, 50, sys.public_key, "h"));
      r.Revoke("sys", "past");
    }
    if (iii) r.RecordCertificate(Certificate("cur", "sys", "standard", 0, 50, sys.public_key, "h"));
    if (ii) r.ClaimCertification("sys", "standard", "h");
    r.AdvanceTo(10);
    const SignedStatement s = SignStatement(i ? sys : KeyPair::FromSeed("impostor"),
                                            MakeStatement("s", {Claim::About(P("x"))}));
    const CheckReport rep = UserCheck(r, s, "sys");
    c.Expect(rep.deployed_by_system == i && rep.claims_certified == ii &&
                 rep.certificate_on_record == iii && rep.never_revoked == !revoked_before &&
                 rep.trusted() == (i && ii && iii && !revoked_before),
             "truth table row " + std::to_string(mask));
  }
}

// 10. New evidence reverses exactly one penalty; the result matches a fresh
// adjudication on the corrected world.
void Reevaluation(Check& c) {
  const KeyPair key = KeyPair::FromSeed("sys");
  Registry registry;
  registry.Register("sys", "dev", key.public_key);
  WorldModel w;
  std::vector<SignedStatement> statements;
  for (int i = 0; i < 20; ++i) {
    w.Set(P(Name(i)), false);
    statements.push_back(SignStatement(
        key, MakeStatement("s" + std::to_string(i), {Claim::About(P(Name(i)))}, "sys", i)));
  }
  const TierConfig tiers({Tier{"cheap", {}, 1.0, UncertaintyBand{}},
                          Tier{"full", {}, 10.0, std::nullopt}});
  Adjudicator adj(registry, w, tiers);
  std::vector<std::string> ids;
  for (const auto& s : statements) {
    ids.push_back(adj.OpenCase(s, "u").case_id);
    c.Expect(adj.Run(ids.back()).negligent, "initial verdict not negligent");
    c.Expect(adj.Sanctions(ids.back()).penalty > 0.0, "no initial penalty");
  }
  WorldPatch patch;
  patch.truths[P(Name(0))] = true;
  const Verdict flipped = adj.Reevaluate(ids[0], patch);
  adj.Reevaluate(ids[1], WorldPatch{});
  c.Expect(!flipped.negligent, "verdict not reversed");
  c.Expect(adj.reversals().size() == 1, "reversals " + std::to_string(adj.reversals().size()));
  c.Expect(!adj.GetCase(ids[0]).sanction.has_value(), "sanction not cleared");

  WorldModel corrected = w;
  corrected.Apply(patch);
  Adjudicator fresh(registry, corrected, tiers);
  for (std::size_t i = 0; i < statements.size(); ++i) {
    const Verdict f = fresh.Run(fresh.OpenCase(statements[i], "u").case_id);
    const Verdict& v = *adj.GetCase(ids[i]).verdict;
    c.Expect(f.negligent == v.negligent && f.accuracy == v.accuracy &&
                 f.severity == v.severity && f.tier_reached == v.tier_reached &&
                 f.provisional == v.provisional,
             "path dependence on case " + ids[i]);
  }
}

// 11. Same seed, same bytes.
void Determinism(Check& c) {
  const Scenario s = LoadScenario(TRUTHSTD_DEMO_SCENARIO);
  const std::string hash = ScenarioFileHash(TRUTHSTD_DEMO_SCENARIO);
  std::vector<RunOptions> runs;
  for (Subcommand sub : {Subcommand::kSimulate, Subcommand::kAdjudicate, Subcommand::kAmplify}) {
    RunOptions o;
    o.subcommand = sub;
    runs.push_back(o);
  }
  for (const auto& agent : s.agents) {
    for (Subcommand sub : {Subcommand::kCertify, Subcommand::kVerify}) {
      RunOptions o;
      o.subcommand = sub;
      o.system = agent.id;
      runs.push_back(o);
    }
  }
  for (const RunOptions& o : runs) {
    const RunReport a = Run(s, hash, o);
    const RunReport b = Run(s, hash, o);
    const std::string label =
        std::string(ToString(o.subcommand)) + (o.system ? " " + *o.system : "");
    c.Expect(ToJson(a, false).dump() == ToJson(b, false).dump(), label + ": reports differ");
    c.Expect(a.statements_jsonl == b.statements_jsonl && a.history_jsonl == b.history_jsonl &&
                 a.summary == b.summary,
             label + ": artifacts differ");
    c.Expect(a.registry.has_value() == b.registry.has_value() &&
                 (!a.registry || ToJson(*a.registry).dump() == ToJson(*b.registry).dump()),
             label + ": registries differ");
  }
}

}  // namespace
}  // namespace truthstd

int main() {
  using truthstd::Check;
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"honest and undeluded implies truthful", truthstd::PredicateImplication},
      {"delusion loophole", truthstd::DelusionLoophole},
      {"severity formula", truthstd::SeverityFormula},
      {"negligence decision table", truthstd::NegligenceTable},
      {"goodhart probe", truthstd::GoodhartPadding},
      {"calibration fixture", truthstd::CalibrationFixture},
      {"amplification worst case", truthstd::AmplificationDetection},
      {"cascade fidelity", truthstd::CascadeFidelity},
      {"attestation", truthstd::Attestation},
      {"reevaluation", truthstd::Reevaluation},
      {"determinism", truthstd::Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("threw: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string measured = c.measured().empty() ? "" : "; " + c.measured();
    std::printf("%s %zu. %s (%.2fs%s)%s\n", c.ok() ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), secs, measured.c_str(), c.notes().c_str());
    if (!c.ok()) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
