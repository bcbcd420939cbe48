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

#include <gtest/gtest.h>

#include <set>

#include "support.hpp"
#include "truthstd/crypto.hpp"
#include "truthstd/error.hpp"
#include "truthstd/statement.hpp"

namespace truthstd {
namespace {

using testing::MakeStatement;
using testing::P;
using testing::ThrownCode;

TEST(Confidence, ProbabilityRange) {
  EXPECT_NO_THROW(ConfidenceLevel::Probabilistic(0.0));
  EXPECT_NO_THROW(ConfidenceLevel::Probabilistic(1.0));
  EXPECT_EQ(ThrownCode([] { ConfidenceLevel::Probabilistic(1.01); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { ConfidenceLevel::Probabilistic(-0.1); }), ErrorCode::kInvalidArgument);
  EXPECT_FALSE(ConfidenceLevel::Confident().probability().has_value());
  EXPECT_DOUBLE_EQ(*ConfidenceLevel::Probabilistic(0.3).probability(), 0.3);
}

TEST(Interpretations, WeightsMustSumToOne) {
  InterpretationTable t;
  EXPECT_NO_THROW(t.Add(AmbiguousRef{"a"}, {{P("x"), 0.8}, {P("y"), 0.2}}));
  EXPECT_NO_THROW(t.Add(AmbiguousRef{"b"}, {{P("x"), 0.7}, {P("y"), 0.3 + 5e-10}}));
  EXPECT_EQ(ThrownCode([&] { t.Add(AmbiguousRef{"c"}, {{P("x"), 0.5}, {P("y"), 0.4}}); }),
            ErrorCode::kWeightSumViolation);
  EXPECT_EQ(ThrownCode([&] { t.Add(AmbiguousRef{"d"}, {{P("x"), 1.5}, {P("y"), -0.5}}); }),
            ErrorCode::kWeightSumViolation);
  EXPECT_EQ(ThrownCode([&] { t.Add(AmbiguousRef{"e"}, {}); }), ErrorCode::kInvalidArgument);
}

TEST(Interpretations, EnumerateClearAndAmbiguous) {
  InterpretationTable t;
  t.Add(AmbiguousRef{"everest"}, {{P("above_sea"), 0.8}, {P("base_to_peak"), 0.2}});

  const auto clear = EnumerateInterpretations(Claim::About(P("x")), t);
  ASSERT_EQ(clear.size(), 1u);
  EXPECT_EQ(clear[0].proposition, P("x"));
  EXPECT_EQ(clear[0].weight, 1.0);

  Claim amb;
  amb.target = AmbiguousRef{"everest"};
  const auto readings = EnumerateInterpretations(amb, t);
  ASSERT_EQ(readings.size(), 2u);
  EXPECT_EQ(readings[1].weight, 0.2);

  amb.target = AmbiguousRef{"undeclared"};
  EXPECT_EQ(ThrownCode([&] { EnumerateInterpretations(amb, t); }),
            ErrorCode::kMissingInterpretationEntry);
  EXPECT_EQ(ThrownCode([&] { (void)amb.proposition(); }), ErrorCode::kMissingInterpretationEntry);
}

TEST(Statement, ValidateRejectsMalformed) {
  EXPECT_EQ(ThrownCode([] { ValidateStatement(MakeStatement("s", {})); }),
            ErrorCode::kMalformedStatement);
  EXPECT_EQ(ThrownCode([] { ValidateStatement(MakeStatement("", {Claim::About(P("x"))})); }),
            ErrorCode::kMalformedStatement);
  EXPECT_EQ(ThrownCode([] { ValidateStatement(MakeStatement("s", {Claim::About(P("x"))}, "")); }),
            ErrorCode::kMalformedStatement);
  Statement s = MakeStatement("s", {Claim::About(P("x"))});
  s.caveat = CaveatScope{0, 2, "fiction"};
  EXPECT_EQ(ThrownCode([&] { ValidateStatement(s); }), ErrorCode::kMalformedStatement);
}

TEST(Statement, SplitClaimsPreservesOrderAndPrefixes) {
  Statement s = MakeStatement("s", {Claim::About(P("a")), Claim::About(P("b"), false),
                                    Claim::About(P("c")), Claim::About(P("d"))});
  s.caveat = CaveatScope{1, 3, "fiction"};
  const auto slices = SplitClaims(s);
  ASSERT_EQ(slices.size(), s.claims.size());
  for (std::size_t i = 0; i < slices.size(); ++i) {
    EXPECT_EQ(slices[i].index, i);
    EXPECT_EQ(*slices[i].claim, s.claims[i]);
    ASSERT_EQ(slices[i].context.size(), i);
    for (std::size_t k = 0; k < i; ++k) EXPECT_EQ(slices[i].context[k], s.claims[k]);
    EXPECT_EQ(slices[i].exempt, i == 1 || i == 2);
  }
}

TEST(Statement, JsonRoundTrip) {
  Claim amb;
  amb.target = AmbiguousRef{"everest"};
  amb.confidence = ConfidenceLevel::Unconfident();
  Claim prob = Claim::About(P("rain"), false, ConfidenceLevel::Probabilistic(0.3));
  Claim self = Claim::About(P("meta"));
  self.self_regarding = true;
  Statement s = MakeStatement("s1", {amb, prob, self}, "agent", 42);
  s.context = "ctx";
  s.caveat = CaveatScope{0, 1, "caveat"};
  EXPECT_EQ(StatementFromJson(ToJson(s)), s);
  EXPECT_EQ(CanonicalDecode(CanonicalEncode(s)), s);
}

TEST(Statement, DecodeRejectsGarbage) {
  const std::string junk = "{\"id\":1}";
  const Bytes bytes(junk.begin(), junk.end());
  EXPECT_EQ(ThrownCode([&] { CanonicalDecode(bytes); }), ErrorCode::kMalformedStatement);
  const std::string broken = "{not json";
  const Bytes b2(broken.begin(), broken.end());
  EXPECT_EQ(ThrownCode([&] { CanonicalDecode(b2); }), ErrorCode::kMalformedStatement);
}

TEST(Statement, EncodingIsStableAcrossFieldOrder) {
  const Statement s = MakeStatement("s", {Claim::About(P("x"))});
  const Json j = ToJson(s);
  // Rebuild the object with its keys in reverse order.
  Json reversed = Json::object();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  for (auto it = keys.rbegin(); it != keys.rend(); ++it) reversed[*it] = j.at(*it);
  EXPECT_EQ(CanonicalEncode(StatementFromJson(reversed)), CanonicalEncode(s));
}

// Structurally distinct statements never share an encoding.
TEST(Statement, CanonicalEncodeInjectiveOnCorpus) {
  Rng rng(7);
  std::set<std::string> digests;
  std::set<std::string> structures;
  const std::size_t n = 10000;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Claim> claims;
    const std::size_t k = 1 + rng.Below(3);
    for (std::size_t c = 0; c < k; ++c) {
      Claim claim = Claim::About(P("p" + std::to_string(rng.Below(20))), rng.Bernoulli(0.5));
      switch (rng.Below(3)) {
        case 0: break;
        case 1: claim.confidence = ConfidenceLevel::Unconfident(); break;
        default: claim.confidence = ConfidenceLevel::Probabilistic(rng.Below(11) / 10.0);
      }
      claims.push_back(claim);
    }
    Statement s = MakeStatement("s" + std::to_string(rng.Below(50)), claims,
                                rng.Bernoulli(0.5) ? "a" : "b", rng.Below(5));
    // Structure key built by hand, independent of the JSON encoder.
    std::string key = s.id + "|" + s.speaker + "|" + std::to_string(s.timestamp);
    for (const auto& c : s.claims) {
      key += "|" + c.proposition().value + (c.polarity ? "+" : "-") +
             std::to_string(static_cast<int>(c.confidence.kind())) +
             (c.confidence.probability() ? std::to_string(*c.confidence.probability()) : "");
    }
    const Bytes enc = CanonicalEncode(s);
    const bool new_structure = structures.insert(key).second;
    const bool new_digest = digests.insert(ToHex(Sha256(enc))).second;
    EXPECT_EQ(new_structure, new_digest) << key;
  }
}

TEST(Statement, WordCountAtLeastOne) {
  EXPECT_EQ(RenderClaim(Claim::About(P("coin_17"), true, ConfidenceLevel::Probabilistic(0.9))),
            "with probability 0.9 it is true that coin 17");
  EXPECT_EQ(WordCount(Claim::About(P("coin_17"), true, ConfidenceLevel::Probabilistic(0.9))), 9u);
  EXPECT_GE(WordCount(Claim::About(P("x"))), 1u);
}

}  // namespace
}  // namespace truthstd
