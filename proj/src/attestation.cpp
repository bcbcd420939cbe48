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

#include "truthstd/attestation.hpp"

#include "json_fields.hpp"
#include "truthstd/error.hpp"

namespace truthstd {

namespace {

[[noreturn]] void UnknownSystem(const std::string& id) {
  throw Error(ErrorCode::kUnknownSystem, "no registry entry for system '" + id + "'");
}

Bytes HexField(const Json& j, const std::string& name) {
  try {
    return FromHex(fields::ReqString(j, name));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchemaError) throw;
    fields::Fail("field '" + name + "' is not valid hex");
  }
}

}  // namespace

SignedStatement SignStatement(const KeyPair& key, const Statement& statement) {
  ValidateStatement(statement);
  const Bytes message = CanonicalEncode(statement);
  return SignedStatement{statement, DefaultSignatureScheme().Sign(key, message)};
}

bool VerifyStatement(std::span<const std::uint8_t> public_key, const SignedStatement& s) {
  const Bytes message = CanonicalEncode(s.statement);
  return DefaultSignatureScheme().Verify(public_key, message, s.signature);
}

Json ToJson(const SignedStatement& s) {
  return Json{{"statement", ToJson(s.statement)}, {"signature", ToHex(s.signature)}};
}

SignedStatement SignedStatementFromJson(const Json& j) {
  SignedStatement s;
  s.statement = StatementFromJson(fields::Req(j, "statement"));
  s.signature = HexField(j, "signature");
  return s;
}

Certificate::Certificate(std::string id, std::string system_id, std::string standard_level,
                         std::uint64_t issued_at, std::uint64_t expires_at, Bytes public_key,
                         std::string policy_hash)
    : id_(std::move(id)),
      system_id_(std::move(system_id)),
      standard_level_(std::move(standard_level)),
      issued_at_(issued_at),
      expires_at_(expires_at),
      public_key_(std::move(public_key)),
      policy_hash_(std::move(policy_hash)) {
  if (expires_at_ <= issued_at_) {
    throw Error(ErrorCode::kInvalidArgument, "certificate must expire after it is issued");
  }
}

Json ToJson(const Certificate& c) {
  Json j = Json::object();
  j["id"] = c.id();
  j["system_id"] = c.system_id();
  j["standard_level"] = c.standard_level();
  j["issued_at"] = c.issued_at();
  j["expires_at"] = c.expires_at();
  j["status"] = c.status() == Certificate::Status::kActive ? "active" : "revoked";
  j["public_key"] = ToHex(c.public_key());
  j["policy_hash"] = c.policy_hash();
  return j;
}

Certificate CertificateFromJson(const Json& j) {
  using namespace fields;
  Certificate c(ReqString(j, "id"), ReqString(j, "system_id"), ReqString(j, "standard_level"),
                ReqUint(j, "issued_at"), ReqUint(j, "expires_at"), HexField(j, "public_key"),
                ReqString(j, "policy_hash"));
  const std::string status = ReqString(j, "status");
  if (status == "revoked") {
    c.Revoke();
  } else if (status != "active") {
    Fail("unknown certificate status '" + status + "'");
  }
  return c;
}

void Registry::Register(const std::string& system_id, const std::string& developer,
                        Bytes public_key) {
  if (Contains(system_id)) {
    throw Error(ErrorCode::kInvalidArgument, "system '" + system_id + "' already registered");
  }
  RegistryEntry entry;
  entry.system_id = system_id;
  entry.developer = developer;
  entry.keys.push_back(KeyEpoch{std::move(public_key), now_, std::nullopt});
  entries_.emplace(system_id, std::move(entry));
}

RegistryEntry& Registry::MutableEntry(const std::string& system_id) {
  auto it = entries_.find(system_id);
  if (it == entries_.end()) UnknownSystem(system_id);
  return it->second;
}

const RegistryEntry& Registry::Entry(const std::string& system_id) const {
  auto it = entries_.find(system_id);
  if (it == entries_.end()) UnknownSystem(system_id);
  return it->second;
}

void Registry::RotateKey(const std::string& system_id, Bytes new_public_key) {
  RegistryEntry& e = MutableEntry(system_id);
  e.keys.back().retired_at = now_;
  e.keys.push_back(KeyEpoch{std::move(new_public_key), now_, std::nullopt});
}

void Registry::Revoke(const std::string& system_id, const std::string& reason) {
  RegistryEntry& e = MutableEntry(system_id);
  RevocationEvent event{now_, reason, {}};
  for (auto& c : e.certificates) {
    if (c.status() == Certificate::Status::kActive) {
      c.Revoke();
      event.certificate_ids.push_back(c.id());
    }
  }
  e.revocations.push_back(std::move(event));
}

void Registry::RecordCertificate(Certificate certificate) {
  RegistryEntry& e = MutableEntry(certificate.system_id());
  for (const auto& c : e.certificates) {
    if (c.id() == certificate.id()) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate certificate id '" + c.id() + "'");
    }
  }
  e.certificates.push_back(std::move(certificate));
}

void Registry::ClaimCertification(const std::string& system_id, const std::string& level,
                                  const std::string& deployed_policy_hash) {
  RegistryEntry& e = MutableEntry(system_id);
  e.deployer = DeployerClaim{true, level, deployed_policy_hash};
}

void Registry::AdvanceTo(std::uint64_t tick) {
  if (tick > now_) now_ = tick;
}

Json ToJson(const Registry& registry) {
  Json systems = Json::array();
  for (const auto& [id, e] : registry.entries()) {
    Json keys = Json::array();
    for (const auto& k : e.keys) {
      keys.push_back(Json{{"public_key", ToHex(k.public_key)},
                          {"activated_at", k.activated_at},
                          {"retired_at", k.retired_at ? Json(*k.retired_at) : Json(nullptr)}});
    }
    Json certs = Json::array();
    for (const auto& c : e.certificates) certs.push_back(ToJson(c));
    Json revs = Json::array();
    for (const auto& r : e.revocations) {
      revs.push_back(Json{{"tick", r.tick},
                          {"reason", r.reason},
                          {"certificate_ids", r.certificate_ids}});
    }
    systems.push_back(Json{{"system_id", e.system_id},
                           {"developer", e.developer},
                           {"keys", std::move(keys)},
                           {"certificates", std::move(certs)},
                           {"revocations", std::move(revs)},
                           {"deployer", Json{{"claims_certified", e.deployer.claims_certified},
                                             {"claimed_level", e.deployer.claimed_level},
                                             {"deployed_policy_hash",
                                              e.deployer.deployed_policy_hash}}}});
  }
  return Json{{"now", registry.now()}, {"systems", std::move(systems)}};
}

Registry RegistryFromJson(const Json& j) {
  using namespace fields;
  Registry r;
  r.now_ = ReqUint(j, "now");
  const Json& systems = Array(Req(j, "systems"), "systems");
  for (std::size_t i = 0; i < systems.size(); ++i) {
    WithPath("systems[" + std::to_string(i) + "]", [&] {
      const Json& s = systems[i];
      RegistryEntry e;
      e.system_id = ReqString(s, "system_id");
      e.developer = ReqString(s, "developer");
      for (const auto& k : Array(Req(s, "keys"), "keys")) {
        KeyEpoch epoch;
        epoch.public_key = HexField(k, "public_key");
        epoch.activated_at = ReqUint(k, "activated_at");
        if (const Json* t = Opt(k, "retired_at")) epoch.retired_at = Uint(*t, "retired_at");
        e.keys.push_back(std::move(epoch));
      }
      if (e.keys.empty()) Fail("system has no keys");
      for (const auto& c : Array(Req(s, "certificates"), "certificates")) {
        e.certificates.push_back(CertificateFromJson(c));
      }
      for (const auto& rev : Array(Req(s, "revocations"), "revocations")) {
        RevocationEvent ev;
        ev.tick = ReqUint(rev, "tick");
        ev.reason = ReqString(rev, "reason");
        for (const auto& id : Array(Req(rev, "certificate_ids"), "certificate_ids")) {
          ev.certificate_ids.push_back(String(id, "certificate_ids[]"));
        }
        e.revocations.push_back(std::move(ev));
      }
      const Json& d = Req(s, "deployer");
      e.deployer = DeployerClaim{ReqBool(d, "claims_certified"), ReqString(d, "claimed_level"),
                                 ReqString(d, "deployed_policy_hash")};
      if (r.entries_.count(e.system_id) != 0) Fail("duplicate system '" + e.system_id + "'");
      r.entries_.emplace(e.system_id, std::move(e));
    });
  }
  return r;
}

SignatureCheck VerifyAgainstRegistry(const Registry& registry, const SignedStatement& s,
                                     const std::string& system_id) {
  const RegistryEntry& e = registry.Entry(system_id);
  const Bytes message = CanonicalEncode(s.statement);
  const auto& scheme = DefaultSignatureScheme();
  for (std::size_t k = e.keys.size(); k-- > 0;) {
    if (scheme.Verify(e.keys[k].public_key, message, s.signature)) {
      return SignatureCheck{true, k + 1 != e.keys.size(), k};
    }
  }
  return SignatureCheck{};
}

CheckReport UserCheck(const Registry& registry, const SignedStatement& s,
                      const std::string& claimed_system) {
  const RegistryEntry& e = registry.Entry(claimed_system);
  CheckReport report;
  report.system_id = claimed_system;

  const SignatureCheck sig = VerifyAgainstRegistry(registry, s, claimed_system);
  report.deployed_by_system = sig.valid && s.statement.speaker == claimed_system;
  report.rotation_notice = sig.rotation_notice;

  report.claims_certified = e.deployer.claims_certified;

  const Bytes& active_key = e.active_key().public_key;
  for (const auto& c : e.certificates) {
    const bool level_ok =
        e.deployer.claimed_level.empty() || c.standard_level() == e.deployer.claimed_level;
    if (c.IsActiveAt(registry.now()) && c.public_key() == active_key && level_ok) {
      report.certificate_on_record = true;
      break;
    }
  }

  report.never_revoked = e.revocations.empty();
  return report;
}

Json ToJson(const CheckReport& r) {
  return Json{{"system", r.system_id},
              {"i_deployed_by_system", r.deployed_by_system},
              {"ii_claims_certified", r.claims_certified},
              {"iii_certificate_on_record", r.certificate_on_record},
              {"iv_never_revoked", r.never_revoked},
              {"rotation_notice", r.rotation_notice},
              {"trusted", r.trusted()}};
}

DeploymentAudit AuditDeployment(const Registry& registry, const std::string& system_id,
                                const std::string& deployed_policy_hash) {
  const RegistryEntry& e = registry.Entry(system_id);
  DeploymentAudit audit;
  audit.deployed_policy_hash = deployed_policy_hash;
  for (auto it = e.certificates.rbegin(); it != e.certificates.rend(); ++it) {
    if (it->IsActiveAt(registry.now())) {
      audit.certified_policy_hash = it->policy_hash();
      break;
    }
  }
  audit.hash_matches =
      !audit.certified_policy_hash.empty() && audit.certified_policy_hash == deployed_policy_hash;
  return audit;
}

}  // namespace truthstd
