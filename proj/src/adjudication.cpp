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

#include "truthstd/adjudication.hpp"

#include <sstream>

#include "truthstd/error.hpp"

namespace truthstd {

TierConfig::TierConfig(std::vector<Tier> tiers) : tiers_(std::move(tiers)) {
  if (tiers_.empty()) throw Error(ErrorCode::kInvalidArgument, "tier config has no tiers");
  for (std::size_t i = 0; i < tiers_.size(); ++i) {
    const Tier& t = tiers_[i];
    if (!(t.cost >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tier cost must be >= 0");
    if (i > 0 && !(t.cost > tiers_[i - 1].cost)) {
      throw Error(ErrorCode::kInvalidArgument, "tier costs must be strictly increasing");
    }
    const bool last = i + 1 == tiers_.size();
    if (last && t.band) {
      throw Error(ErrorCode::kInvalidArgument, "final tier must not have an uncertainty band");
    }
    if (!last && !t.band) {
      throw Error(ErrorCode::kInvalidArgument,
                  "tier '" + t.name + "' needs an uncertainty band to escalate on");
    }
    if (t.band && !(t.band->lo <= t.band->hi)) {
      throw Error(ErrorCode::kInvalidArgument, "uncertainty band has lo > hi");
    }
  }
}

double TierConfig::FullCost() const {
  double total = 0.0;
  for (const auto& t : tiers_) total += t.cost;
  return total;
}

std::string_view ToString(CaseStatus status) {
  switch (status) {
    case CaseStatus::kOpen: return "open";
    case CaseStatus::kTierDone: return "tier_done";
    case CaseStatus::kClosed: return "closed";
    case CaseStatus::kReopened: return "reopened";
  }
  return "open";
}

Json ToJson(const Verdict& v) {
  return Json{{"negligent", v.negligent},       {"severity", v.severity},
              {"accuracy", v.accuracy},         {"tier_reached", v.tier_reached},
              {"provisional", v.provisional},   {"evidence_version", v.evidence_version},
              {"total_cost", v.total_cost}};
}

void ValidateSanctionPolicy(const SanctionPolicy& policy) {
  const auto& s = policy.schedule;
  if (s.empty() || s.front().first != 0.0 || s.front().second != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "sanction schedule must start at (0, 0)");
  }
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].first > s[i - 1].first) || !(s[i].second >= s[i - 1].second)) {
      throw Error(ErrorCode::kInvalidArgument, "sanction schedule must be non-decreasing");
    }
  }
  if (!(policy.interim_fraction >= 0.0 && policy.interim_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "interim_fraction must lie in [0,1]");
  }
}

double SanctionPolicy::Penalty(double severity) const {
  if (severity <= schedule.front().first) return schedule.front().second;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const auto& [x1, y1] = schedule[i];
    if (severity <= x1) {
      const auto& [x0, y0] = schedule[i - 1];
      return y0 + (y1 - y0) * (severity - x0) / (x1 - x0);
    }
  }
  return schedule.back().second;
}

Json ToJson(const Sanction& s) {
  return Json{{"penalty", s.penalty},
              {"severity", s.severity},
              {"interim", s.interim},
              {"revocation_signal", s.revocation_signal}};
}

Sanction ApplySanction(const Verdict& verdict, const SanctionPolicy& policy) {
  ValidateSanctionPolicy(policy);
  Sanction s;
  s.severity = verdict.severity;
  if (!verdict.negligent) return s;
  s.interim = verdict.provisional;
  s.penalty = policy.Penalty(verdict.severity);
  if (s.interim) s.penalty *= policy.interim_fraction;
  s.revocation_signal = verdict.severity >= policy.revoke_threshold;
  return s;
}

Verdict RunCascade(Case& c, const TierConfig& config, const WorldModel& world) {
  if (c.status != CaseStatus::kOpen && c.status != CaseStatus::kReopened) {
    throw Error(ErrorCode::kCaseState,
                "case '" + c.case_id + "' is " + std::string(ToString(c.status)));
  }
  const auto& tiers = config.tiers();
  Verdict v;
  v.evidence_version = c.evidence_version;
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const Tier& tier = tiers[i];
    const StatementAssessment a = tier.pipeline.Assess(c.reported.statement, world);
    const double accuracy = a.accuracy.value();
    const bool escalate = tier.band && tier.band->Contains(accuracy);
    v.total_cost += tier.cost;
    c.history.push_back(TierResult{i, tier.name, accuracy, a.negligent(), tier.cost, escalate,
                                   c.evidence_version});
    c.status = CaseStatus::kTierDone;
    if (!escalate) {
      v.negligent = a.negligent();
      v.accuracy = accuracy;
      v.severity = Severity(a.accuracy, tier.pipeline.severity);
      v.tier_reached = i;
      v.provisional = i + 1 < tiers.size();
      break;
    }
  }
  c.status = CaseStatus::kClosed;
  c.verdict = v;
  return v;
}

Adjudicator::Adjudicator(const Registry& registry, WorldModel world, TierConfig tiers,
                         SanctionPolicy policy)
    : registry_(registry),
      world_(std::move(world)),
      tiers_(std::move(tiers)),
      policy_(std::move(policy)) {
  ValidateSanctionPolicy(policy_);
}

const Case& Adjudicator::OpenCase(const SignedStatement& s, const std::string& reporter) {
  const std::string case_id = "case:" + s.statement.id;
  if (auto it = cases_.find(case_id); it != cases_.end()) {
    if (it->second.reported == s) return it->second;
  }
  const std::string& system = s.statement.speaker;
  const bool valid =
      registry_.Contains(system) && VerifyAgainstRegistry(registry_, s, system).valid;
  if (!valid) {
    referrals_.push_back(AuditReferral{s.statement.id, system, reporter});
    throw Error(ErrorCode::kSignatureInvalid,
                "statement '" + s.statement.id + "' does not verify for '" + system + "'");
  }
  if (auto it = cases_.find(case_id); it != cases_.end()) {
    // A validly signed statement that differs from the reported one under
    // the same id means the speaker reused an id; keep the first report.
    return it->second;
  }
  Case c;
  c.case_id = case_id;
  c.reported = s;
  c.reporter = reporter;
  return cases_.emplace(case_id, std::move(c)).first->second;
}

Case& Adjudicator::MutableCase(const std::string& case_id) {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(ErrorCode::kCaseState, "no case '" + case_id + "'");
  return it->second;
}

const Case& Adjudicator::GetCase(const std::string& case_id) const {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(ErrorCode::kCaseState, "no case '" + case_id + "'");
  return it->second;
}

Verdict Adjudicator::Run(const std::string& case_id) {
  return RunCascade(MutableCase(case_id), tiers_, world_);
}

Verdict Adjudicator::Reevaluate(const std::string& case_id, const WorldPatch& patch) {
  Case& c = MutableCase(case_id);
  if (c.status != CaseStatus::kClosed) {
    throw Error(ErrorCode::kCaseState, "only closed cases can be re-evaluated");
  }
  const bool was_negligent = c.verdict && c.verdict->negligent;
  world_.Apply(patch);
  c.status = CaseStatus::kReopened;
  ++c.evidence_version;
  const Verdict v = RunCascade(c, tiers_, world_);
  if (was_negligent && !v.negligent) {
    reversals_.push_back(
        PenaltyReversal{c.case_id, c.reported.statement.id, c.sanction, c.evidence_version});
    c.sanction.reset();
  }
  return v;
}

Sanction Adjudicator::Sanctions(const std::string& case_id) {
  Case& c = MutableCase(case_id);
  if (!c.verdict) throw Error(ErrorCode::kCaseState, "case '" + case_id + "' has no verdict");
  Sanction s = ApplySanction(*c.verdict, policy_);
  c.sanction = s;
  return s;
}

std::string ExportHistory(const Case& c) {
  std::ostringstream out;
  for (const auto& r : c.history) {
    out << Json{{"case", c.case_id},
                {"statement", c.reported.statement.id},
                {"tier", r.tier},
                {"tier_name", r.tier_name},
                {"accuracy", r.accuracy},
                {"negligent", r.negligent},
                {"cost", r.cost},
                {"escalated", r.escalated},
                {"evidence_version", r.evidence_version}}
               .dump()
        << '\n';
  }
  return out.str();
}

}  // namespace truthstd
