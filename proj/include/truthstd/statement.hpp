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

// Statements, claims and their canonical wire form.
//
// Propositions are symbolic identifiers resolved against a WorldModel; a
// statement is an ordered list of claims about them. The canonical encoding
// is compact JSON with a fixed field order and is the byte string that
// attestation signs.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace truthstd {

using Json = nlohmann::ordered_json;
using Bytes = std::vector<std::uint8_t>;

struct PropositionId {
  std::string value;

  auto operator<=>(const PropositionId&) const = default;
};

// Names an ambiguous phrase whose readings live in an InterpretationTable.
struct AmbiguousRef {
  std::string value;

  auto operator<=>(const AmbiguousRef&) const = default;
};

class ConfidenceLevel {
 public:
  enum class Kind { kConfident, kProbabilistic, kUnconfident };

  static ConfidenceLevel Confident() { return ConfidenceLevel(Kind::kConfident, 0.0); }
  static ConfidenceLevel Unconfident() { return ConfidenceLevel(Kind::kUnconfident, 0.0); }
  // Throws kInvalidArgument unless 0 <= p <= 1.
  static ConfidenceLevel Probabilistic(double p);

  Kind kind() const { return kind_; }
  bool is_probabilistic() const { return kind_ == Kind::kProbabilistic; }
  std::optional<double> probability() const {
    if (kind_ != Kind::kProbabilistic) return std::nullopt;
    return p_;
  }

  bool operator==(const ConfidenceLevel&) const = default;

 private:
  ConfidenceLevel(Kind kind, double p) : kind_(kind), p_(p) {}

  Kind kind_;
  double p_;
};

std::string_view ToString(ConfidenceLevel::Kind kind);

struct Claim {
  std::variant<PropositionId, AmbiguousRef> target;
  // true asserts that the target holds, false that it does not. For a
  // probabilistic claim the stated probability attaches to this polarity.
  bool polarity = true;
  ConfidenceLevel confidence = ConfidenceLevel::Confident();
  bool self_regarding = false;

  bool is_ambiguous() const { return std::holds_alternative<AmbiguousRef>(target); }
  // Throws kMissingInterpretationEntry when the claim is ambiguous.
  const PropositionId& proposition() const;

  bool operator==(const Claim&) const = default;

  static Claim About(PropositionId p, bool polarity = true,
                     ConfidenceLevel confidence = ConfidenceLevel::Confident()) {
    return Claim{std::move(p), polarity, confidence, false};
  }
};

struct Interpretation {
  PropositionId proposition;
  double weight = 1.0;

  bool operator==(const Interpretation&) const = default;
};

inline constexpr double kWeightSumTolerance = 1e-9;

class InterpretationTable {
 public:
  // Throws kWeightSumViolation if weights are outside [0,1] or do not sum to
  // 1 within kWeightSumTolerance, kInvalidArgument if `readings` is empty.
  void Add(const AmbiguousRef& ref, std::vector<Interpretation> readings);

  const std::vector<Interpretation>* Find(const AmbiguousRef& ref) const;
  const std::map<AmbiguousRef, std::vector<Interpretation>>& entries() const {
    return entries_;
  }

  bool operator==(const InterpretationTable&) const = default;

 private:
  std::map<AmbiguousRef, std::vector<Interpretation>> entries_;
};

// Half-open range [begin, end) of claim indices covered by a fiction or
// caveat marker. Claims inside it are exempt from evaluation.
struct CaveatScope {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string marker = "fiction";

  bool Covers(std::size_t index) const { return index >= begin && index < end; }
  bool operator==(const CaveatScope&) const = default;
};

struct Statement {
  std::string id;
  std::string speaker;
  std::uint64_t timestamp = 0;
  std::vector<Claim> claims;
  std::string context;
  std::optional<CaveatScope> caveat;

  bool operator==(const Statement&) const = default;
};

// Throws kMalformedStatement: empty claims, empty id/speaker, or a caveat
// range outside the claim list.
void ValidateStatement(const Statement& statement);

// One claim together with the claims that precede it in its statement.
// Views into the statement; valid while the statement is alive.
struct ClaimSlice {
  const Claim* claim = nullptr;
  std::span<const Claim> context;
  std::size_t index = 0;
  bool exempt = false;
};

std::vector<ClaimSlice> SplitClaims(const Statement& statement);

// Unambiguous claims yield their proposition at weight 1; ambiguous claims
// yield the table's readings unchanged.
std::vector<Interpretation> EnumerateInterpretations(const Claim& claim,
                                                     const InterpretationTable& table);

Json ToJson(const Claim& claim);
Json ToJson(const Statement& statement);
Claim ClaimFromJson(const Json& j);
Statement StatementFromJson(const Json& j);

Json ToJson(const InterpretationTable& table);
InterpretationTable InterpretationTableFromJson(const Json& j);

// Compact UTF-8 JSON, fixed field order, no insignificant whitespace.
Bytes CanonicalEncode(const Statement& statement);
// Inverse of CanonicalEncode; throws kMalformedStatement on bad input.
Statement CanonicalDecode(std::span<const std::uint8_t> bytes);

// Fixed rendering used for per-word metrics, e.g.
// "with probability 0.9 it is true that coin 17".
std::string RenderClaim(const Claim& claim);
// Whitespace-token count of RenderClaim(claim); always >= 1.
std::size_t WordCount(const Claim& claim);

}  // namespace truthstd
