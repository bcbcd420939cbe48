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

#include "truthstd/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

#include "truthstd/error.hpp"

namespace truthstd {

namespace {

void EnsureSodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw std::runtime_error("libsodium failed to initialise");
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = HexValue(hex[2 * i]);
    const int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::kInvalidArgument, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

Bytes Sha256(std::span<const std::uint8_t> data) {
  EnsureSodium();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

std::string Sha256Hex(std::string_view data) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
  return ToHex(Sha256({p, data.size()}));
}

KeyPair KeyPair::FromSeed(std::string_view seed_text) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(seed_text.data());
  const Bytes seed = Sha256({p, seed_text.size()});
  return DefaultSignatureScheme().Generate(seed);
}

KeyPair Ed25519Scheme::Generate(std::span<const std::uint8_t> seed32) const {
  EnsureSodium();
  if (seed32.size() != crypto_sign_SEEDBYTES) {
    throw Error(ErrorCode::kInvalidArgument, "ed25519 seed must be 32 bytes");
  }
  KeyPair key{Bytes(crypto_sign_PUBLICKEYBYTES), Bytes(crypto_sign_SECRETKEYBYTES)};
  crypto_sign_seed_keypair(key.public_key.data(), key.private_key.data(), seed32.data());
  return key;
}

Bytes Ed25519Scheme::Sign(const KeyPair& key, std::span<const std::uint8_t> message) const {
  EnsureSodium();
  if (key.private_key.size() != crypto_sign_SECRETKEYBYTES) {
    throw Error(ErrorCode::kInvalidArgument, "ed25519 private key has the wrong size");
  }
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       key.private_key.data());
  return sig;
}

bool Ed25519Scheme::Verify(std::span<const std::uint8_t> public_key,
                           std::span<const std::uint8_t> message,
                           std::span<const std::uint8_t> signature) const {
  EnsureSodium();
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) {
    return false;
  }
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

const SignatureScheme& DefaultSignatureScheme() {
  static const Ed25519Scheme scheme;
  return scheme;
}

}  // namespace truthstd
