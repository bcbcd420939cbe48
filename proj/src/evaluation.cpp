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

#include "truthstd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json_fields.hpp"
#include "numeric.hpp"
#include "truthstd/error.hpp"

namespace truthstd {

namespace {

double Clamp01(double x) {
  if (std::isnan(x)) return 0.5;
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

AccuracyScore::AccuracyScore(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "accuracy score " + std::to_string(value) + " outside [0,1]");
  }
}

Evaluator::Evaluator(std::string name, Behavior behavior)
    : name_(std::move(name)), behavior_(std::move(behavior)) {}

Evaluator Evaluator::Faithful(std::string name) {
  EvaluatorConfig cfg;
  cfg.name = std::move(name);
  return FromConfig(std::move(cfg));
}

Evaluator Evaluator::FromConfig(EvaluatorConfig config) {
  if (!(config.fidelity >= 0.0 && config.fidelity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "evaluator fidelity outside [0,1]");
  }
  if (!(config.noise >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "evaluator noise must be >= 0");
  }
  auto behavior = [config](const PropositionId& p, bool polarity, const WorldModel& world) {
    double score = config.fidelity * world.ProbabilityOf(p, polarity) +
                   (1.0 - config.fidelity) * 0.5;
    score += config.bias;
    if (auto it = config.bias_profile.find(p); it != config.bias_profile.end()) {
      score += it->second;
    }
    if (config.noise > 0.0) {
      const std::uint64_t h = SplitMix64(config.noise_seed ^ Fnv1a64(p.value) ^
                                         (polarity ? 0x5bd1e995ULL : 0ULL));
      score += config.noise * (2.0 * UnitFromBits(h) - 1.0);
    }
    return score;
  };
  Evaluator e(config.name, std::move(behavior));
  e.config_ = std::move(config);
  return e;
}

AccuracyScore Evaluator::Score(const PropositionId& p, bool polarity,
                               const WorldModel& world) const {
  return AccuracyScore(Clamp01(behavior_(p, polarity, world)));
}

Json ToJson(const EvaluatorConfig& c) {
  Json j = Json::object();
  j["name"] = c.name;
  j["fidelity"] = c.fidelity;
  j["bias"] = c.bias;
  Json profile = Json::object();
  for (const auto& [p, b] : c.bias_profile) profile[p.value] = b;
  j["bias_profile"] = std::move(profile);
  j["noise"] = c.noise;
  j["noise_seed"] = c.noise_seed;
  return j;
}

EvaluatorConfig EvaluatorConfigFromJson(const Json& j) {
  using namespace fields;
  Object(j, "evaluator");
  EvaluatorConfig c;
  c.name = OptString(j, "name", "evaluator");
  c.fidelity = OptNumber(j, "fidelity", 1.0);
  c.bias = OptNumber(j, "bias", 0.0);
  if (const Json* profile = Opt(j, "bias_profile")) {
    for (const auto& [name, v] : Object(*profile, "bias_profile").items()) {
      c.bias_profile[PropositionId{name}] = Number(v, name);
    }
  }
  c.noise = OptNumber(j, "noise", 0.0);
  c.noise_seed = OptUint(j, "noise_seed", 0);
  if (!(c.fidelity >= 0.0 && c.fidelity <= 1.0)) Fail("fidelity outside [0,1]");
  if (!(c.noise >= 0.0)) Fail("noise must be >= 0");
  return c;
}

Json ToJson(const AggregationMethod& m) {
  switch (m.kind) {
    case AggregationMethod::Kind::kMean: return "mean";
    case AggregationMethod::Kind::kMedian: return "median";
    case AggregationMethod::Kind::kTrimmedMean: return Json{{"trimmed_mean", m.trim}};
  }
  return "median";
}

AggregationMethod AggregationMethodFromJson(const Json& j) {
  using namespace fields;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "mean") return AggregationMethod::Mean();
    if (name == "median") return AggregationMethod::Median();
    Fail("unknown aggregation '" + name + "'");
  }
  return AggregationMethod::TrimmedMean(ReqUint(j, "trimmed_mean"));
}

AccuracyScore AggregateEnsemble(std::span<const AccuracyScore> scores,
                                AggregationMethod method) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyEnsemble, "no scores to aggregate");

  if (method.kind == AggregationMethod::Kind::kMean) {
    CompensatedSum sum;
    for (const auto& s : scores) sum.Add(s.value());
    return AccuracyScore(Clamp01(sum.value() / static_cast<double>(scores.size())));
  }

  std::vector<double> sorted;
  sorted.reserve(scores.size());
  for (const auto& s : scores) sorted.push_back(s.value());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  if (method.kind == AggregationMethod::Kind::kTrimmedMean && 2 * method.trim < n) {
    CompensatedSum sum;
    for (std::size_t i = method.trim; i < n - method.trim; ++i) sum.Add(sorted[i]);
    return AccuracyScore(
        Clamp01(sum.value() / static_cast<double>(n - 2 * method.trim)));
  }

  if (n % 2 == 1) return AccuracyScore(sorted[n / 2]);
  return AccuracyScore(Clamp01(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])));
}

AccuracyScore WeightedAccuracy(std::span<const ScoredInterpretation> interps) {
  if (interps.empty()) {
    throw Error(ErrorCode::kWeightSumViolation, "no interpretations to weight");
  }
  std::vector<const ScoredInterpretation*> order;
  order.reserve(interps.size());
  for (const auto& s : interps) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::tie(a->interpretation.proposition, a->interpretation.weight, a->score) <
           std::tie(b->interpretation.proposition, b->interpretation.weight, b->score);
  });

  CompensatedSum weights;
  CompensatedSum total;
  for (const auto* s : order) {
    const double w = s->interpretation.weight;
    if (!(w >= 0.0 && w <= 1.0)) {
      throw Error(ErrorCode::kWeightSumViolation, "interpretation weight outside [0,1]");
    }
    weights.Add(w);
    total.Add(w * s->score.value());
  }
  if (std::abs(weights.value() - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorCode::kWeightSumViolation,
                "interpretation weights sum to " + std::to_string(weights.value()));
  }
  return AccuracyScore(Clamp01(total.value()));
}

double Severity(AccuracyScore score, SeverityParams params) {
  if (!(params.exponent >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "severity exponent must be >= 1");
  }
  return std::pow(1.0 - score.value(), params.exponent);
}

void ValidateNegligenceConfig(const NegligenceConfig& cfg) {
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "negligence threshold must lie in (0,1)");
  }
  if (!(cfg.unconfident_discount >= 0.0 && cfg.unconfident_discount <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "unconfident_discount must lie in [0,1]");
  }
}

std::string_view ToString(NegligenceReason reason) {
  switch (reason) {
    case NegligenceReason::kBelowBothThresholds: return "below_both_thresholds";
    case NegligenceReason::kGroundTruthAcceptable: return "ground_truth_acceptable";
    case NegligenceReason::kBenchmarkCouldNotRecognise:
      return "benchmark_could_not_recognise";
    case NegligenceReason::kBeatsBenchmark: return "beats_benchmark";
    case NegligenceReason::kCaveatExempt: return "caveat_exempt";
    case NegligenceReason::kPeersClearlyBetter: return "peers_clearly_better";
    case NegligenceReason::kPeersNotClearlyBetter: return "peers_not_clearly_better";
  }
  return "unknown";
}

NegligenceDecision JudgeNegligence(AccuracyScore ground_truth, AccuracyScore benchmark,
                                   const Claim& claim, const NegligenceConfig& cfg) {
  ValidateNegligenceConfig(cfg);
  NegligenceDecision d;
  d.effective_threshold = cfg.threshold;
  if (claim.confidence.kind() == ConfidenceLevel::Kind::kUnconfident) {
    d.effective_threshold -= cfg.unconfident_discount;
  }

  if (auto q = claim.confidence.probability()) {
    const double lo = std::min(ground_truth.value(), benchmark.value());
    const double hi = std::max(ground_truth.value(), benchmark.value());
    if (lo <= *q && *q <= hi) {
      d.negligent = false;
      d.reason = NegligenceReason::kBeatsBenchmark;
      return d;
    }
  }

  const bool gt_low = ground_truth.value() < d.effective_threshold;
  const bool bench_low = benchmark.value() < d.effective_threshold;
  d.negligent = gt_low && bench_low;
  if (!gt_low) {
    d.reason = NegligenceReason::kGroundTruthAcceptable;
  } else if (!bench_low) {
    d.reason = NegligenceReason::kBenchmarkCouldNotRecognise;
  } else {
    d.reason = NegligenceReason::kBelowBothThresholds;
  }
  return d;
}

NegligenceDecision JudgeNegligenceByPeers(AccuracyScore evaluated,
                                          std::span<const AccuracyScore> peers,
                                          const PeerComparisonConfig& cfg) {
  NegligenceDecision d;
  d.effective_threshold = evaluated.value() + cfg.margin;
  d.reason = NegligenceReason::kPeersNotClearlyBetter;
  if (peers.empty()) return d;
  std::size_t better = 0;
  for (const auto& p : peers) {
    if (p.value() - evaluated.value() > cfg.margin) ++better;
  }
  if (static_cast<double>(better) >= cfg.fraction * static_cast<double>(peers.size())) {
    d.negligent = true;
    d.reason = NegligenceReason::kPeersClearlyBetter;
  }
  return d;
}

ClaimAssessment ScoreClaim(const ClaimSlice& slice, const Evaluator& ground_truth,
                           std::span<const Evaluator> panel,
                           const InterpretationTable& table, const NegligenceConfig& cfg,
                           AggregationMethod aggregation, const WorldModel& world) {
  ClaimAssessment out;
  out.index = slice.index;
  out.exempt = slice.exempt;
  if (slice.exempt) {
    out.decision.effective_threshold = cfg.threshold;
    out.decision.reason = NegligenceReason::kCaveatExempt;
    return out;
  }
  if (panel.empty()) throw Error(ErrorCode::kEmptyEnsemble, "benchmark panel is empty");

  const Claim& claim = *slice.claim;
  std::vector<ScoredInterpretation> gt_scores;
  std::vector<ScoredInterpretation> bench_scores;
  std::vector<AccuracyScore> member_scores;
  for (const auto& interp : EnumerateInterpretations(claim, table)) {
    const AccuracyScore gt = ground_truth.Score(interp.proposition, claim.polarity, world);
    member_scores.clear();
    for (const auto& member : panel) {
      member_scores.push_back(member.Score(interp.proposition, claim.polarity, world));
    }
    const AccuracyScore bench = AggregateEnsemble(member_scores, aggregation);
    out.interpretations.push_back(InterpretationScore{interp, gt, bench});
    gt_scores.push_back(ScoredInterpretation{interp, gt});
    bench_scores.push_back(ScoredInterpretation{interp, bench});
  }
  out.ground_truth = WeightedAccuracy(gt_scores);
  out.benchmark = WeightedAccuracy(bench_scores);
  out.decision = JudgeNegligence(out.ground_truth, out.benchmark, claim, cfg);
  return out;
}

ClaimAssessment EvaluationPipeline::AssessClaim(const ClaimSlice& slice,
                                                const WorldModel& world) const {
  return ScoreClaim(slice, ground_truth, benchmark_panel, interpretations, negligence,
                    aggregation, world);
}

StatementAssessment EvaluationPipeline::Assess(const Statement& statement,
                                               const WorldModel& world) const {
  StatementAssessment out;
  out.statement_id = statement.id;
  double lowest = 1.0;
  for (const auto& slice : SplitClaims(statement)) {
    ClaimAssessment a = AssessClaim(slice, world);
    if (a.decision.negligent) ++out.negligent_count;
    if (!a.exempt) lowest = std::min(lowest, a.ground_truth.value());
    out.claims.push_back(std::move(a));
  }
  out.accuracy = AccuracyScore(lowest);
  return out;
}

Json ToJson(const StatementAssessment& a) {
  Json claims = Json::array();
  for (const auto& c : a.claims) {
    claims.push_back(Json{{"index", c.index},
                          {"exempt", c.exempt},
                          {"ground_truth", c.ground_truth.value()},
                          {"benchmark", c.benchmark.value()},
                          {"negligent", c.decision.negligent},
                          {"reason", std::string(ToString(c.decision.reason))}});
  }
  return Json{{"statement", a.statement_id},
              {"accuracy", a.accuracy.value()},
              {"negligent_count", a.negligent_count},
              {"claims", std::move(claims)}};
}

}  // namespace truthstd
