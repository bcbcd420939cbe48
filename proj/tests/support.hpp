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

// Fixture builders and reference oracles shared by the unit and acceptance
// tests. The oracles are written from the definitions, not from the engine
// code, and deliberately avoid calling the functions they check.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "truthstd/adjudication.hpp"
#include "truthstd/attestation.hpp"
#include "truthstd/error.hpp"
#include "truthstd/evaluation.hpp"
#include "truthstd/rng.hpp"
#include "truthstd/statement.hpp"
#include "truthstd/world.hpp"

namespace truthstd::testing {

// The code of the truthstd::Error thrown by `fn`, or nullopt.
inline std::optional<ErrorCode> ThrownCode(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline PropositionId P(const std::string& name) { return PropositionId{name}; }

inline std::string Name(std::size_t i) { return "p" + std::to_string(i); }

// n propositions p0..p{n-1}; about `freq_share` of them carry a base rate.
inline WorldModel RandomWorld(Rng& rng, std::size_t n, double freq_share = 0.0) {
  WorldModel w;
  for (std::size_t i = 0; i < n; ++i) {
    w.Set(P(Name(i)), rng.Bernoulli(0.5));
    if (rng.Uniform() < freq_share) {
      // Keep away from 0.5, where the majority outcome is a coin flip.
      const double f = rng.Bernoulli(0.5) ? 0.05 + 0.4 * rng.Uniform() : 0.55 + 0.4 * rng.Uniform();
      w.SetFrequency(P(Name(i)), f);
    }
  }
  return w;
}

inline AgentPolicy RandomPolicy(Rng& rng, const WorldModel& world) {
  AgentPolicy p;
  const std::uint64_t shape = rng.Below(4);
  p.truth_weight = shape == 0 ? kInfiniteWeight : 4.0 * rng.Uniform();
  p.selection_power = shape == 1 ? 0.0 : 5.0 * rng.Uniform();
  p.mistake_rate = rng.Bernoulli(0.5) ? 0.0 : 0.3 * rng.Uniform();
  p.decline_rate = rng.Bernoulli(0.7) ? 0.0 : 0.2 * rng.Uniform();
  p.defend_mistakes = rng.Bernoulli(0.2);
  for (const auto& [prop, _] : world.truths()) {
    const double u = rng.Uniform();
    if (u < 0.1) p.delusion_map.insert(prop);
    if (u > 0.95) p.lie_triggers.insert(prop);
    if (rng.Uniform() < 0.2) p.payoffs[prop] = Payoff{rng.Uniform(), rng.Uniform()};
  }
  return p;
}

inline std::vector<Prompt> PromptsFor(const WorldModel& world,
                                      PromptMode mode = PromptMode::kCategorical) {
  std::vector<Prompt> out;
  for (const auto& [p, _] : world.truths()) out.push_back(Prompt{p, mode, ""});
  return out;
}

inline Statement MakeStatement(const std::string& id, std::vector<Claim> claims,
                               const std::string& speaker = "sys", std::uint64_t ts = 1) {
  Statement s;
  s.id = id;
  s.speaker = speaker;
  s.timestamp = ts;
  s.claims = std::move(claims);
  return s;
}

// ---- oracles -------------------------------------------------------------

// The negligence decision table, restated.
//   kind 0 confident, 1 unconfident, 2 probabilistic at q.
inline bool OracleNegligent(double gt, double bench, double t, int kind, double q = 0.0,
                            double discount = 0.25) {
  if (kind == 2) {
    const bool between = (gt <= q && q <= bench) || (bench <= q && q <= gt);
    if (between) return false;
  }
  const double bar = kind == 1 ? t - discount : t;
  if (gt >= bar) return false;
  if (bench >= bar) return false;
  return true;
}

// (1 - s)^a by repeated multiplication for integral a, exp/log otherwise.
inline double OracleSeverity(double s, double a) {
  const double x = 1.0 - s;
  if (a == std::floor(a)) {
    double out = 1.0;
    for (int i = 0; i < static_cast<int>(a); ++i) out *= x;
    return out;
  }
  return x == 0.0 ? 0.0 : std::exp(a * std::log(x));
}

// The polarity a claim commits to, written out independently.
inline std::optional<bool> OracleCommitment(const Claim& c) {
  if (c.self_regarding) return std::nullopt;
  if (std::holds_alternative<AmbiguousRef>(c.target)) return std::nullopt;
  if (c.confidence.kind() == ConfidenceLevel::Kind::kProbabilistic) {
    const double q = *c.confidence.probability();
    if (q > 0.5) return c.polarity;
    if (q < 0.5) return !c.polarity;
    return std::nullopt;
  }
  return c.polarity;
}

inline bool OracleWorldSays(const WorldModel& w, const PropositionId& p) {
  if (auto f = w.Frequency(p)) return *f >= 0.5;
  return w.truths().at(p);
}

struct OracleVerdicts {
  bool truthful = true;
  bool honest = true;
  bool undeluded = true;
};

inline OracleVerdicts OraclePredicates(const Trace& trace, const BeliefStore& final_beliefs,
                                       const WorldModel& w) {
  OracleVerdicts v;
  for (std::size_t k = 0; k < trace.statements.size(); ++k) {
    for (const auto& c : trace.statements[k].claims) {
      const auto said = OracleCommitment(c);
      if (!said) continue;
      const auto& p = std::get<PropositionId>(c.target);
      if (*said != OracleWorldSays(w, p)) v.truthful = false;
      if (*said != trace.belief_snapshots[k]->beliefs.at(p)) v.honest = false;
    }
  }
  for (const auto& [p, b] : final_beliefs.beliefs) {
    if (b != OracleWorldSays(w, p)) v.undeluded = false;
  }
  return v;
}

// Faithful-evaluator accuracy of a confident claim.
inline double OracleAccuracy(const WorldModel& w, const PropositionId& p, bool polarity) {
  if (auto f = w.Frequency(p)) return polarity ? *f : 1.0 - *f;
  return w.truths().at(p) == polarity ? 1.0 : 0.0;
}

}  // namespace truthstd::testing
