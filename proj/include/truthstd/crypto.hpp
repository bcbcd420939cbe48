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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace truthstd {

using Bytes = std::vector<std::uint8_t>;

std::string ToHex(std::span<const std::uint8_t> bytes);
// Throws kInvalidArgument on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

Bytes Sha256(std::span<const std::uint8_t> data);
std::string Sha256Hex(std::string_view data);

struct KeyPair {
  Bytes public_key;
  Bytes private_key;

  // Deterministic key derived from SHA-256(seed_text); scenario keys are
  // reproducible from their declared seed.
  static KeyPair FromSeed(std::string_view seed_text);
};

// Signing backend. One deterministic asymmetric scheme (Ed25519) is wired in.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;

  virtual std::string_view name() const = 0;
  virtual KeyPair Generate(std::span<const std::uint8_t> seed32) const = 0;
  virtual Bytes Sign(const KeyPair& key, std::span<const std::uint8_t> message) const = 0;
  virtual bool Verify(std::span<const std::uint8_t> public_key,
                      std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature) const = 0;
};

class Ed25519Scheme final : public SignatureScheme {
 public:
  std::string_view name() const override { return "ed25519"; }
  KeyPair Generate(std::span<const std::uint8_t> seed32) const override;
  Bytes Sign(const KeyPair& key, std::span<const std::uint8_t> message) const override;
  bool Verify(std::span<const std::uint8_t> public_key, std::span<const std::uint8_t> message,
              std::span<const std::uint8_t> signature) const override;
};

const SignatureScheme& DefaultSignatureScheme();

}  // namespace truthstd
