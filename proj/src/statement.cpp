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

#include "truthstd/statement.hpp"

#include <cmath>
#include <sstream>

#include "truthstd/error.hpp"

namespace truthstd {

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedStatement, what);
}

const Json& Field(const Json& j, const char* name) {
  if (!j.is_object()) Malformed(std::string("expected object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) Malformed(std::string("missing field '") + name + "'");
  return *it;
}

std::string StringField(const Json& j, const char* name) {
  const Json& v = Field(j, name);
  if (!v.is_string()) Malformed(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

bool BoolField(const Json& j, const char* name) {
  const Json& v = Field(j, name);
  if (!v.is_boolean()) Malformed(std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

std::uint64_t UintField(const Json& j, const char* name) {
  const Json& v = Field(j, name);
  if (!v.is_number_unsigned()) {
    Malformed(std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double NumberField(const Json& j, const char* name) {
  const Json& v = Field(j, name);
  if (!v.is_number()) Malformed(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

}  // namespace

ConfidenceLevel ConfidenceLevel::Probabilistic(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "probability outside [0,1]");
  }
  return ConfidenceLevel(Kind::kProbabilistic, p);
}

std::string_view ToString(ConfidenceLevel::Kind kind) {
  switch (kind) {
    case ConfidenceLevel::Kind::kConfident: return "confident";
    case ConfidenceLevel::Kind::kProbabilistic: return "probabilistic";
    case ConfidenceLevel::Kind::kUnconfident: return "unconfident";
  }
  return "confident";
}

const PropositionId& Claim::proposition() const {
  if (const auto* p = std::get_if<PropositionId>(&target)) return *p;
  throw Error(ErrorCode::kMissingInterpretationEntry,
              "claim refers to ambiguous '" + std::get<AmbiguousRef>(target).value +
                  "' and has no single proposition");
}

void InterpretationTable::Add(const AmbiguousRef& ref,
                              std::vector<Interpretation> readings) {
  if (readings.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no interpretations for '" + ref.value + "'");
  }
  double sum = 0.0;
  for (const auto& r : readings) {
    if (!(r.weight >= 0.0 && r.weight <= 1.0)) {
      throw Error(ErrorCode::kWeightSumViolation,
                  "interpretation weight outside [0,1] for '" + ref.value + "'");
    }
    sum += r.weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorCode::kWeightSumViolation,
                "interpretation weights for '" + ref.value + "' sum to " +
                    std::to_string(sum));
  }
  entries_[ref] = std::move(readings);
}

const std::vector<Interpretation>* InterpretationTable::Find(const AmbiguousRef& ref) const {
  auto it = entries_.find(ref);
  return it == entries_.end() ? nullptr : &it->second;
}

void ValidateStatement(const Statement& s) {
  if (s.id.empty()) Malformed("statement id is empty");
  if (s.speaker.empty()) Malformed("statement '" + s.id + "' has no speaker");
  if (s.claims.empty()) Malformed("statement '" + s.id + "' has no claims");
  if (s.caveat && (s.caveat->begin > s.caveat->end || s.caveat->end > s.claims.size())) {
    Malformed("statement '" + s.id + "' caveat range lies outside its claims");
  }
}

std::vector<ClaimSlice> SplitClaims(const Statement& statement) {
  std::vector<ClaimSlice> out;
  out.reserve(statement.claims.size());
  const std::span<const Claim> all(statement.claims);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool exempt = statement.caveat && statement.caveat->Covers(i);
    out.push_back(ClaimSlice{&all[i], all.first(i), i, exempt});
  }
  return out;
}

std::vector<Interpretation> EnumerateInterpretations(const Claim& claim,
                                                     const InterpretationTable& table) {
  if (const auto* p = std::get_if<PropositionId>(&claim.target)) {
    return {Interpretation{*p, 1.0}};
  }
  const auto& ref = std::get<AmbiguousRef>(claim.target);
  const auto* readings = table.Find(ref);
  if (readings == nullptr) {
    throw Error(ErrorCode::kMissingInterpretationEntry,
                "no interpretation entry for '" + ref.value + "'");
  }
  return *readings;
}

Json ToJson(const Claim& claim) {
  Json j = Json::object();
  if (const auto* p = std::get_if<PropositionId>(&claim.target)) {
    j["proposition"] = p->value;
  } else {
    j["ambiguous"] = std::get<AmbiguousRef>(claim.target).value;
  }
  j["polarity"] = claim.polarity;
  Json conf = Json::object();
  conf["kind"] = std::string(ToString(claim.confidence.kind()));
  if (auto p = claim.confidence.probability()) conf["p"] = *p;
  j["confidence"] = std::move(conf);
  j["self_regarding"] = claim.self_regarding;
  return j;
}

Claim ClaimFromJson(const Json& j) {
  Claim c;
  const bool has_prop = j.is_object() && j.contains("proposition");
  const bool has_amb = j.is_object() && j.contains("ambiguous");
  if (has_prop == has_amb) {
    Malformed("claim must set exactly one of 'proposition' / 'ambiguous'");
  }
  if (has_prop) {
    c.target = PropositionId{StringField(j, "proposition")};
  } else {
    c.target = AmbiguousRef{StringField(j, "ambiguous")};
  }
  c.polarity = BoolField(j, "polarity");
  const Json& conf = Field(j, "confidence");
  const std::string kind = StringField(conf, "kind");
  if (kind == "confident") {
    c.confidence = ConfidenceLevel::Confident();
  } else if (kind == "unconfident") {
    c.confidence = ConfidenceLevel::Unconfident();
  } else if (kind == "probabilistic") {
    const double p = NumberField(conf, "p");
    if (!(p >= 0.0 && p <= 1.0)) Malformed("probabilistic claim with p outside [0,1]");
    c.confidence = ConfidenceLevel::Probabilistic(p);
  } else {
    Malformed("unknown confidence kind '" + kind + "'");
  }
  if (kind != "probabilistic" && conf.contains("p")) {
    Malformed("'p' present on a non-probabilistic claim");
  }
  c.self_regarding = BoolField(j, "self_regarding");
  return c;
}

Json ToJson(const Statement& s) {
  Json j = Json::object();
  j["id"] = s.id;
  j["speaker"] = s.speaker;
  j["timestamp"] = s.timestamp;
  j["context"] = s.context;
  Json claims = Json::array();
  for (const auto& c : s.claims) claims.push_back(ToJson(c));
  j["claims"] = std::move(claims);
  if (s.caveat) {
    j["caveat"] = Json{{"begin", s.caveat->begin},
                       {"end", s.caveat->end},
                       {"marker", s.caveat->marker}};
  } else {
    j["caveat"] = nullptr;
  }
  return j;
}

Statement StatementFromJson(const Json& j) {
  Statement s;
  s.id = StringField(j, "id");
  s.speaker = StringField(j, "speaker");
  s.timestamp = UintField(j, "timestamp");
  s.context = StringField(j, "context");
  const Json& claims = Field(j, "claims");
  if (!claims.is_array()) Malformed("'claims' must be an array");
  for (const auto& c : claims) s.claims.push_back(ClaimFromJson(c));
  auto it = j.find("caveat");
  if (it != j.end() && !it->is_null()) {
    s.caveat = CaveatScope{UintField(*it, "begin"), UintField(*it, "end"),
                           StringField(*it, "marker")};
  }
  ValidateStatement(s);
  return s;
}

Json ToJson(const InterpretationTable& table) {
  Json j = Json::object();
  for (const auto& [ref, readings] : table.entries()) {
    Json arr = Json::array();
    for (const auto& r : readings) {
      arr.push_back(Json{{"proposition", r.proposition.value}, {"weight", r.weight}});
    }
    j[ref.value] = std::move(arr);
  }
  return j;
}

InterpretationTable InterpretationTableFromJson(const Json& j) {
  InterpretationTable table;
  if (!j.is_object()) Malformed("interpretation table must be an object");
  for (const auto& [name, arr] : j.items()) {
    if (!arr.is_array()) Malformed("interpretations of '" + name + "' must be an array");
    std::vector<Interpretation> readings;
    for (const auto& r : arr) {
      readings.push_back(
          Interpretation{PropositionId{StringField(r, "proposition")}, NumberField(r, "weight")});
    }
    table.Add(AmbiguousRef{name}, std::move(readings));
  }
  return table;
}

Bytes CanonicalEncode(const Statement& statement) {
  const std::string text = ToJson(statement).dump();
  return Bytes(text.begin(), text.end());
}

Statement CanonicalDecode(std::span<const std::uint8_t> bytes) {
  Json j;
  try {
    j = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    Malformed(std::string("canonical bytes do not parse: ") + e.what());
  }
  return StatementFromJson(j);
}

std::string RenderClaim(const Claim& claim) {
  std::ostringstream out;
  switch (claim.confidence.kind()) {
    case ConfidenceLevel::Kind::kConfident: break;
    case ConfidenceLevel::Kind::kProbabilistic:
      out << "with probability " << Json(*claim.confidence.probability()).dump() << ' ';
      break;
    case ConfidenceLevel::Kind::kUnconfident: out << "I am unsure but "; break;
  }
  out << (claim.polarity ? "it is true that " : "it is false that ");
  std::string name = claim.is_ambiguous() ? std::get<AmbiguousRef>(claim.target).value
                                          : std::get<PropositionId>(claim.target).value;
  for (char& ch : name) {
    if (ch == '_' || ch == '-' || ch == ':' || ch == '.') ch = ' ';
  }
  out << name;
  return out.str();
}

std::size_t WordCount(const Claim& claim) {
  std::istringstream in(RenderClaim(claim));
  std::size_t n = 0;
  std::string token;
  while (in >> token) ++n;
  return n;
}

}  // namespace truthstd
