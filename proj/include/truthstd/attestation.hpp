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

// Statement signing and the public registry users consult before trusting a
// deployed system.
//
// A user check answers four questions about the claimed system:
//   (i)   the statement's signature verifies under the system's key
//   (ii)  the deployer claims the system is certified
//   (iii) a matching active certificate is on record
//   (iv)  the system has never had a certification revoked
// The system is trusted only if all four hold.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "truthstd/crypto.hpp"
#include "truthstd/statement.hpp"

namespace truthstd {

struct SignedStatement {
  Statement statement;
  Bytes signature;

  bool operator==(const SignedStatement&) const = default;
};

// Signs CanonicalEncode(statement). Ed25519 is deterministic, so equal keys
// and statements give equal signatures.
SignedStatement SignStatement(const KeyPair& key, const Statement& statement);
bool VerifyStatement(std::span<const std::uint8_t> public_key, const SignedStatement& signed_statement);

Json ToJson(const SignedStatement& s);
SignedStatement SignedStatementFromJson(const Json& j);

class Certificate {
 public:
  enum class Status { kActive, kRevoked };

  // Throws kInvalidArgument unless expires_at > issued_at.
  Certificate(std::string id, std::string system_id, std::string standard_level,
              std::uint64_t issued_at, std::uint64_t expires_at, Bytes public_key,
              std::string policy_hash);

  const std::string& id() const { return id_; }
  const std::string& system_id() const { return system_id_; }
  const std::string& standard_level() const { return standard_level_; }
  std::uint64_t issued_at() const { return issued_at_; }
  std::uint64_t expires_at() const { return expires_at_; }
  Status status() const { return status_; }
  const Bytes& public_key() const { return public_key_; }
  const std::string& policy_hash() const { return policy_hash_; }

  bool IsActiveAt(std::uint64_t tick) const {
    return status_ == Status::kActive && tick >= issued_at_ && tick < expires_at_;
  }
  // One-way: there is no path back to kActive.
  void Revoke() { status_ = Status::kRevoked; }

  bool operator==(const Certificate&) const = default;

 private:
  std::string id_;
  std::string system_id_;
  std::string standard_level_;
  std::uint64_t issued_at_;
  std::uint64_t expires_at_;
  Status status_ = Status::kActive;
  Bytes public_key_;
  std::string policy_hash_;

  friend Certificate CertificateFromJson(const Json& j);
};

Json ToJson(const Certificate& c);
Certificate CertificateFromJson(const Json& j);

struct KeyEpoch {
  Bytes public_key;
  std::uint64_t activated_at = 0;
  std::optional<std::uint64_t> retired_at;

  bool operator==(const KeyEpoch&) const = default;
};

struct RevocationEvent {
  std::uint64_t tick = 0;
  std::string reason;
  std::vector<std::string> certificate_ids;

  bool operator==(const RevocationEvent&) const = default;
};

struct DeployerClaim {
  bool claims_certified = false;
  std::string claimed_level;
  std::string deployed_policy_hash;

  bool operator==(const DeployerClaim&) const = default;
};

struct RegistryEntry {
  std::string system_id;
  std::string developer;
  // Last epoch is the active key; earlier ones are archived.
  std::vector<KeyEpoch> keys;
  std::vector<Certificate> certificates;
  // Append-only.
  std::vector<RevocationEvent> revocations;
  DeployerClaim deployer;

  const KeyEpoch& active_key() const { return keys.back(); }
  bool operator==(const RegistryEntry&) const = default;
};

class Registry {
 public:
  // Throws kInvalidArgument if the system is already registered.
  void Register(const std::string& system_id, const std::string& developer, Bytes public_key);
  // Archives the active key. Throws kUnknownSystem.
  void RotateKey(const std::string& system_id, Bytes new_public_key);
  // Appends a revocation event and revokes every active certificate of the
  // system. Repeated revocations are recorded as separate events.
  void Revoke(const std::string& system_id, const std::string& reason);
  // Throws kUnknownSystem, or kInvalidArgument on a duplicate certificate id.
  void RecordCertificate(Certificate certificate);
  void ClaimCertification(const std::string& system_id, const std::string& level,
                          const std::string& deployed_policy_hash);

  bool Contains(const std::string& system_id) const { return entries_.count(system_id) != 0; }
  // Throws kUnknownSystem.
  const RegistryEntry& Entry(const std::string& system_id) const;
  const std::map<std::string, RegistryEntry>& entries() const { return entries_; }

  std::uint64_t now() const { return now_; }
  // Moves the registry clock forward; never backward.
  void AdvanceTo(std::uint64_t tick);

  bool operator==(const Registry&) const = default;

 private:
  RegistryEntry& MutableEntry(const std::string& system_id);

  std::map<std::string, RegistryEntry> entries_;
  std::uint64_t now_ = 0;

  friend Registry RegistryFromJson(const Json& j);
};

Json ToJson(const Registry& registry);
Registry RegistryFromJson(const Json& j);

// Reader/writer wrapper: concurrent reads see a consistent snapshot and
// mutations are serialized.
class SharedRegistry {
 public:
  explicit SharedRegistry(Registry registry = {}) : registry_(std::move(registry)) {}

  Registry Snapshot() const {
    std::shared_lock lock(mutex_);
    return registry_;
  }
  template <typename Fn>
  decltype(auto) Read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return fn(static_cast<const Registry&>(registry_));
  }
  template <typename Fn>
  decltype(auto) Mutate(Fn&& fn) {
    std::unique_lock lock(mutex_);
    return fn(registry_);
  }

 private:
  mutable std::shared_mutex mutex_;
  Registry registry_;
};

struct SignatureCheck {
  bool valid = false;
  // Verified only under an archived (rotated-out) key.
  bool rotation_notice = false;
  std::size_t key_epoch = 0;
};

// Tries the active key first, then archived keys newest to oldest.
// Throws kUnknownSystem.
SignatureCheck VerifyAgainstRegistry(const Registry& registry, const SignedStatement& s,
                                     const std::string& system_id);

struct CheckReport {
  std::string system_id;
  bool deployed_by_system = false;  // (i)
  bool claims_certified = false;    // (ii)
  bool certificate_on_record = false;  // (iii)
  bool never_revoked = false;       // (iv)
  bool rotation_notice = false;

  bool trusted() const {
    return deployed_by_system && claims_certified && certificate_on_record && never_revoked;
  }
};

// Throws kUnknownSystem.
CheckReport UserCheck(const Registry& registry, const SignedStatement& s,
                      const std::string& claimed_system);

Json ToJson(const CheckReport& report);

struct DeploymentAudit {
  bool hash_matches = false;
  std::string certified_policy_hash;
  std::string deployed_policy_hash;
};

// Compares the deployed policy hash with the newest active certificate's.
DeploymentAudit AuditDeployment(const Registry& registry, const std::string& system_id,
                                const std::string& deployed_policy_hash);

}  // namespace truthstd
