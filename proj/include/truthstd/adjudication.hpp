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

// Post-deployment adjudication of reported statements.
//
// A case moves open -> (tier results)* -> closed, and may be reopened when
// new evidence patches the world. Tiers run cheapest first; a tier whose
// accuracy lands inside its uncertainty band escalates to the next one.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "truthstd/attestation.hpp"
#include "truthstd/evaluation.hpp"
#include "truthstd/world.hpp"

namespace truthstd {

struct UncertaintyBand {
  double lo = 0.35;
  double hi = 0.65;

  bool Contains(double x) const { return x >= lo && x <= hi; }
  bool operator==(const UncertaintyBand&) const = default;
};

struct Tier {
  std::string name;
  EvaluationPipeline pipeline;
  double cost = 1.0;
  // Empty on the final tier, which is always conclusive.
  std::optional<UncertaintyBand> band;
};

class TierConfig {
 public:
  // Throws kInvalidArgument: no tiers, costs not strictly increasing, a band
  // on the final tier, or a missing band on an earlier one.
  explicit TierConfig(std::vector<Tier> tiers);

  const std::vector<Tier>& tiers() const { return tiers_; }
  // Cost when every tier runs.
  double FullCost() const;

 private:
  std::vector<Tier> tiers_;
};

enum class CaseStatus { kOpen, kTierDone, kClosed, kReopened };

std::string_view ToString(CaseStatus status);

struct TierResult {
  std::size_t tier = 0;
  std::string tier_name;
  double accuracy = 1.0;
  bool negligent = false;
  double cost = 0.0;
  bool escalated = false;
  std::uint64_t evidence_version = 0;
};

struct Verdict {
  bool negligent = false;
  // Severity() of `accuracy` under the deciding tier's severity params.
  double severity = 0.0;
  double accuracy = 1.0;
  std::size_t tier_reached = 0;
  // Decided before the final tier.
  bool provisional = false;
  std::uint64_t evidence_version = 0;
  double total_cost = 0.0;

  bool operator==(const Verdict&) const = default;
};

Json ToJson(const Verdict& v);

struct SanctionPolicy {
  // (severity, penalty) knots, linearly interpolated. Must start at (0, 0)
  // and be non-decreasing in both coordinates.
  std::vector<std::pair<double, double>> schedule{
      {0.0, 0.0}, {0.25, 1.0}, {0.5, 4.0}, {0.75, 16.0}, {1.0, 64.0}};
  double revoke_threshold = 0.8;
  // Share of the schedule charged while a verdict is provisional.
  double interim_fraction = 0.5;

  double Penalty(double severity) const;

  bool operator==(const SanctionPolicy&) const = default;
};

// Throws kInvalidArgument.
void ValidateSanctionPolicy(const SanctionPolicy& policy);

struct Sanction {
  double penalty = 0.0;
  double severity = 0.0;
  bool interim = false;
  bool revocation_signal = false;

  bool operator==(const Sanction&) const = default;
};

Json ToJson(const Sanction& s);

// Zero for non-negligent verdicts; interim_fraction of the schedule for
// provisional ones. Signals revocation when severity >= revoke_threshold.
Sanction ApplySanction(const Verdict& verdict, const SanctionPolicy& policy);

struct Case {
  std::string case_id;
  SignedStatement reported;
  std::string reporter;
  CaseStatus status = CaseStatus::kOpen;
  // Append-only.
  std::vector<TierResult> history;
  std::optional<Verdict> verdict;
  std::optional<Sanction> sanction;
  std::uint64_t evidence_version = 0;
};

// Runs the tiers in order against `world`, appends every tier run to the
// case history and closes the case. Throws kCaseState unless the case is
// open or reopened.
Verdict RunCascade(Case& c, const TierConfig& tiers, const WorldModel& world);

struct PenaltyReversal {
  std::string case_id;
  std::string statement_id;
  std::optional<Sanction> reversed;
  std::uint64_t evidence_version = 0;
};

// A signature failure on report, routed to the attestation audit.
struct AuditReferral {
  std::string statement_id;
  std::string claimed_system;
  std::string reporter;
};

// Owns the cases of one scenario. Single writer per instance.
class Adjudicator {
 public:
  Adjudicator(const Registry& registry, WorldModel world, TierConfig tiers,
              SanctionPolicy policy = {});

  // Idempotent per statement id. Throws kSignatureInvalid (after recording
  // an AuditReferral) when the signature does not verify for the speaker.
  const Case& OpenCase(const SignedStatement& s, const std::string& reporter);
  Verdict Run(const std::string& case_id);
  // Applies the patch to the world, reopens the case and reruns the cascade.
  // Emits a PenaltyReversal when a negligent verdict becomes non-negligent.
  // Throws kCaseState unless the case is closed.
  Verdict Reevaluate(const std::string& case_id, const WorldPatch& patch);
  // Computes and records the sanction for the current verdict.
  Sanction Sanctions(const std::string& case_id);

  // Throws kCaseState for an unknown case id.
  const Case& GetCase(const std::string& case_id) const;
  const std::map<std::string, Case>& cases() const { return cases_; }
  const std::vector<PenaltyReversal>& reversals() const { return reversals_; }
  const std::vector<AuditReferral>& audit_referrals() const { return referrals_; }
  const WorldModel& world() const { return world_; }
  const TierConfig& tiers() const { return tiers_; }

 private:
  Case& MutableCase(const std::string& case_id);

  const Registry& registry_;
  WorldModel world_;
  TierConfig tiers_;
  SanctionPolicy policy_;
  std::map<std::string, Case> cases_;
  std::vector<PenaltyReversal> reversals_;
  std::vector<AuditReferral> referrals_;
};

// One JSON object per line, one line per tier run.
std::string ExportHistory(const Case& c);

}  // namespace truthstd
