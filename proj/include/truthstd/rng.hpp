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
#include <random>
#include <string_view>

namespace truthstd {

// 64-bit FNV-1a. Used to name seed streams and to derive pure per-item
// noise; the output is part of the reproducibility contract.
std::uint64_t Fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t SplitMix64(std::uint64_t x);

// Derives the seed of a named sub-stream from a master seed:
//   SplitMix64(master ^ Fnv1a64(stream_name)).
// Adding a new stream name never perturbs existing ones.
std::uint64_t SplitSeed(std::uint64_t master, std::string_view stream_name);

// Maps 64 random bits onto [0, 1) using the top 53 bits.
inline double UnitFromBits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Seeded random source. std::mt19937_64's output sequence is fixed by the
// standard; the std distributions are not, so sampling is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextBits() { return engine_(); }
  double Uniform() { return UnitFromBits(engine_()); }
  bool Bernoulli(double p) { return Uniform() < p; }
  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t Below(std::uint64_t n);
  // Standard normal via Box-Muller.
  double Normal();

  Rng Fork(std::string_view stream_name) {
    return Rng(SplitSeed(NextBits(), stream_name));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace truthstd
