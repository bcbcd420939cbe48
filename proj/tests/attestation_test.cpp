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

#include <atomic>
#include <set>
#include <thread>

#include "support.hpp"
#include "truthstd/attestation.hpp"
#include "truthstd/crypto.hpp"

namespace truthstd {
namespace {

using namespace testing;

TEST(Crypto, HexAndSha256KnownVectors) {
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(ToHex(FromHex("00ff10")), "00ff10");
  EXPECT_EQ(ThrownCode([] { FromHex("abc"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([] { FromHex("zz"); }), ErrorCode::kInvalidArgument);
}

TEST(Crypto, SeededKeysAreDeterministicAndDistinct) {
  EXPECT_EQ(KeyPair::FromSeed("a").public_key, KeyPair::FromSeed("a").public_key);
  EXPECT_NE(KeyPair::FromSeed("a").public_key, KeyPair::FromSeed("b").public_key);
  EXPECT_EQ(KeyPair::FromSeed("a").public_key.size(), 32u);
}

TEST(Signing, SignVerifyDeterministic) {
  const KeyPair key = KeyPair::FromSeed("k");
  const Statement s = MakeStatement("s", {Claim::About(P("x"))});
  const SignedStatement a = SignStatement(key, s);
  EXPECT_EQ(a, SignStatement(key, s));
  EXPECT_TRUE(VerifyStatement(key.public_key, a));
  EXPECT_FALSE(VerifyStatement(KeyPair::FromSeed("other").public_key, a));
  EXPECT_EQ(SignedStatementFromJson(ToJson(a)), a);
  EXPECT_EQ(ThrownCode([&] { SignStatement(key, MakeStatement("s", {})); }),
            ErrorCode::kMalformedStatement);
}

TEST(Signing, TamperedStatementsFail) {
  const KeyPair key = KeyPair::FromSeed("k");
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const SignedStatement good = SignStatement(
        key, MakeStatement("s" + std::to_string(i), {Claim::About(P("x"), true)}, "sys", i));
    SignedStatement bad = good;
    switch (rng.Below(5)) {
      case 0: bad.statement.claims[0].polarity = false; break;
      case 1: bad.statement.timestamp += 1 + rng.Below(100); break;
      case 2: bad.statement.speaker += "x"; break;
      case 3: bad.statement.claims.push_back(Claim::About(P("y"))); break;
      default: bad.signature[rng.Below(bad.signature.size())] ^= 1u << rng.Below(8); break;
    }
    EXPECT_FALSE(VerifyStatement(key.public_key, bad)) << i;
  }
}

TEST(Certificate, ValidityWindowAndOneWayRevoke) {
  EXPECT_EQ(ThrownCode([] { Certificate("c", "s", "standard", 5, 5, {}, "h"); }),
            ErrorCode::kInvalidArgument);
  Certificate c("c", "s", "standard", 5, 10, {1, 2}, "h");
  EXPECT_FALSE(c.IsActiveAt(4));
  EXPECT_TRUE(c.IsActiveAt(5));
  EXPECT_FALSE(c.IsActiveAt(10));
  c.Revoke();
  EXPECT_FALSE(c.IsActiveAt(6));
  EXPECT_EQ(CertificateFromJson(ToJson(c)), c);
}

TEST(Registry, RegisterRotateRevoke) {
  Registry r;
  const KeyPair k1 = KeyPair::FromSeed("1");
  const KeyPair k2 = KeyPair::FromSeed("2");
  r.Register("sys", "dev", k1.public_key);
  EXPECT_EQ(ThrownCode([&] { r.Register("sys", "dev", k1.public_key); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ThrownCode([&] { r.RotateKey("ghost", k2.public_key); }), ErrorCode::kUnknownSystem);

  const SignedStatement old = SignStatement(k1, MakeStatement("s", {Claim::About(P("x"))}));
  r.AdvanceTo(3);
  r.RotateKey("sys", k2.public_key);
  const SignatureCheck check = VerifyAgainstRegistry(r, old, "sys");
  EXPECT_TRUE(check.valid);
  EXPECT_TRUE(check.rotation_notice);
  EXPECT_EQ(check.key_epoch, 0u);
  EXPECT_EQ(r.Entry("sys").keys[0].retired_at, 3u);

  r.RecordCertificate(Certificate("c1", "sys", "standard", 3, 100, k2.public_key, "h"));
  EXPECT_EQ(ThrownCode([&] {
              r.RecordCertificate(Certificate("c1", "sys", "standard", 3, 100, {}, "h"));
            }),
            ErrorCode::kInvalidArgument);
  r.Revoke("sys", "first");
  r.Revoke("sys", "second");
  ASSERT_EQ(r.Entry("sys").revocations.size(), 2u);
  EXPECT_EQ(r.Entry("sys").revocations[0].certificate_ids, std::vector<std::string>{"c1"});
  EXPECT_TRUE(r.Entry("sys").revocations[1].certificate_ids.empty());

  r.AdvanceTo(1);
  EXPECT_EQ(r.now(), 3u);
}

TEST(Registry, JsonRoundTripKeepsRevocationOrder) {
  Registry r;
  r.Register("a", "dev", KeyPair::FromSeed("a").public_key);
  r.Register("b", "dev", KeyPair::FromSeed("b").public_key);
  r.RecordCertificate(Certificate("c1", "a", "standard", 0, 10, r.Entry("a").active_key().public_key, "h"));
  r.ClaimCertification("a", "standard", "h");
  r.AdvanceTo(4);
  r.Revoke("a", "r1");
  r.AdvanceTo(7);
  r.Revoke("a", "r2");
  r.RotateKey("b", KeyPair::FromSeed("b2").public_key);
  const Registry back = RegistryFromJson(ToJson(r));
  EXPECT_EQ(back, r);
  EXPECT_EQ(back.Entry("a").revocations[0].reason, "r1");
  EXPECT_EQ(back.Entry("a").revocations[1].tick, 7u);
}

TEST(Registry, RejectsMalformedJson) {
  EXPECT_EQ(ThrownCode([] { RegistryFromJson(Json::parse(R"({"now":0})")); }),
            ErrorCode::kSchemaError);
  EXPECT_EQ(ThrownCode([] {
              RegistryFromJson(Json::parse(
                  R"({"now":0,"systems":[{"system_id":"a","developer":"d","keys":[],"certificates":[],"revocations":[],"deployer":{"claims_certified":false,"claimed_level":"","deployed_policy_hash":""}}]})"));
            }),
            ErrorCode::kSchemaError);
}

// Builds a registry where each of the four checks is switched on or off.
struct Fixture {
  Registry registry;
  SignedStatement statement;
};

Fixture Build(bool signed_by_system, bool claims, bool cert, bool revoked) {
  Fixture f;
  const KeyPair key = KeyPair::FromSeed("sys");
  f.registry.Register("sys", "dev", key.public_key);
  if (revoked) {
    f.registry.RecordCertificate(Certificate("old", "sys", "standard", 0, 50, key.public_key, "h"));
    f.registry.Revoke("sys", "past");
  }
  if (cert) {
    f.registry.RecordCertificate(Certificate("cur", "sys", "standard", 0, 50, key.public_key, "h"));
  }
  if (claims) f.registry.ClaimCertification("sys", "standard", "h");
  f.registry.AdvanceTo(10);
  const KeyPair signer = signed_by_system ? key : KeyPair::FromSeed("impostor");
  f.statement = SignStatement(signer, MakeStatement("s", {Claim::About(P("x"))}));
  return f;
}

TEST(UserCheck, TruthTable) {
  for (int mask = 0; mask < 16; ++mask) {
    const bool i = mask & 1, ii = mask & 2, iii = mask & 4, iv_revoked = mask & 8;
    const Fixture f = Build(i, ii, iii, iv_revoked);
    const CheckReport r = UserCheck(f.registry, f.statement, "sys");
    EXPECT_EQ(r.deployed_by_system, i) << mask;
    EXPECT_EQ(r.claims_certified, ii) << mask;
    EXPECT_EQ(r.certificate_on_record, iii) << mask;
    EXPECT_EQ(r.never_revoked, !iv_revoked) << mask;
    EXPECT_EQ(r.trusted(), i && ii && iii && !iv_revoked) << mask;
  }
  const Fixture f = Build(true, true, true, false);
  EXPECT_EQ(ThrownCode([&] { UserCheck(f.registry, f.statement, "ghost"); }),
            ErrorCode::kUnknownSystem);
}

TEST(UserCheck, ExpiredOrMismatchedCertificateIsNotOnRecord) {
  Fixture f = Build(true, true, true, false);
  f.registry.AdvanceTo(50);
  EXPECT_FALSE(UserCheck(f.registry, f.statement, "sys").certificate_on_record);

  Fixture g = Build(true, true, true, false);
  g.registry.ClaimCertification("sys", "strict", "h");
  EXPECT_FALSE(UserCheck(g.registry, g.statement, "sys").certificate_on_record);
}

// Random operation sequences: a revoked certificate stays revoked and a
// system with revocation history never passes the user check.
TEST(Registry, RevocationPermanenceFuzz) {
  Rng rng(42);
  const KeyPair key = KeyPair::FromSeed("sys");
  const SignedStatement st = SignStatement(key, MakeStatement("s", {Claim::About(P("x"))}));
  for (int seq = 0; seq < 2000; ++seq) {
    Registry r;
    r.Register("sys", "dev", key.public_key);
    std::set<std::string> revoked;
    int next_cert = 0;
    for (int op = 0; op < 20; ++op) {
      switch (rng.Below(6)) {
        case 0: {
          const std::uint64_t start = r.now();
          r.RecordCertificate(Certificate("c" + std::to_string(next_cert++), "sys", "standard",
                                          start, start + 1 + rng.Below(20), key.public_key, "h"));
          break;
        }
        case 1:
          for (const auto& c : r.Entry("sys").certificates) {
            if (c.status() == Certificate::Status::kActive) revoked.insert(c.id());
          }
          r.Revoke("sys", "fuzz");
          break;
        case 2: r.AdvanceTo(r.now() + rng.Below(5)); break;
        case 3: r.ClaimCertification("sys", "standard", "h"); break;
        case 4: r = RegistryFromJson(ToJson(r)); break;
        default: r.RotateKey("sys", key.public_key); break;
      }
      for (const auto& c : r.Entry("sys").certificates) {
        if (revoked.count(c.id())) {
          EXPECT_EQ(c.status(), Certificate::Status::kRevoked);
        }
      }
      if (!r.Entry("sys").revocations.empty()) {
        EXPECT_FALSE(UserCheck(r, st, "sys").trusted());
      }
    }
  }
}

TEST(Registry, AuditDeployment) {
  Fixture f = Build(true, true, true, false);
  EXPECT_TRUE(AuditDeployment(f.registry, "sys", "h").hash_matches);
  const DeploymentAudit bad = AuditDeployment(f.registry, "sys", "other");
  EXPECT_FALSE(bad.hash_matches);
  EXPECT_EQ(bad.certified_policy_hash, "h");
}

TEST(SharedRegistry, ConcurrentReadersSeeConsistentSnapshots) {
  SharedRegistry shared;
  shared.Mutate([](Registry& r) { r.Register("sys", "dev", KeyPair::FromSeed("s").public_key); });
  std::vector<std::thread> readers;
  std::atomic<int> inconsistent{0};
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&] {
      for (int i = 0; i < 200; ++i) {
        shared.Read([&](const Registry& r) {
          const auto& e = r.Entry("sys");
          // Every revocation event is recorded together with a tick bump.
          if (e.revocations.size() != r.now()) ++inconsistent;
          return 0;
        });
      }
    });
  }
  for (int i = 0; i < 100; ++i) {
    shared.Mutate([](Registry& r) {
      r.AdvanceTo(r.now() + 1);
      r.Revoke("sys", "x");
    });
  }
  for (auto& t : readers) t.join();
  EXPECT_EQ(inconsistent.load(), 0);
  EXPECT_EQ(shared.Snapshot().Entry("sys").revocations.size(), 100u);
}

}  // namespace
}  // namespace truthstd
