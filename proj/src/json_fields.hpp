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

// Field accessors for configuration JSON. Every failure is a kSchemaError
// naming the offending field; callers nest paths with WithPath().

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "truthstd/error.hpp"
#include "truthstd/statement.hpp"

namespace truthstd::fields {

[[noreturn]] inline void Fail(const std::string& what) {
  throw Error(ErrorCode::kSchemaError, what);
}

inline const Json& Req(const Json& j, const std::string& name) {
  if (!j.is_object()) Fail("expected an object containing '" + name + "'");
  auto it = j.find(name);
  if (it == j.end()) Fail("missing field '" + name + "'");
  return *it;
}

inline const Json* Opt(const Json& j, const std::string& name) {
  if (!j.is_object()) Fail("expected an object");
  auto it = j.find(name);
  return (it == j.end() || it->is_null()) ? nullptr : &*it;
}

inline std::string String(const Json& v, const std::string& name) {
  if (!v.is_string()) Fail("field '" + name + "' must be a string");
  return v.get<std::string>();
}

inline double Number(const Json& v, const std::string& name) {
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) Fail("field '" + name + "' must be a number");
  return v.get<double>();
}

inline bool Bool(const Json& v, const std::string& name) {
  if (!v.is_boolean()) Fail("field '" + name + "' must be a boolean");
  return v.get<bool>();
}

inline std::uint64_t Uint(const Json& v, const std::string& name) {
  if (!v.is_number_unsigned()) Fail("field '" + name + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string ReqString(const Json& j, const std::string& name) {
  return String(Req(j, name), name);
}
inline double ReqNumber(const Json& j, const std::string& name) {
  return Number(Req(j, name), name);
}
inline bool ReqBool(const Json& j, const std::string& name) { return Bool(Req(j, name), name); }
inline std::uint64_t ReqUint(const Json& j, const std::string& name) {
  return Uint(Req(j, name), name);
}

inline double OptNumber(const Json& j, const std::string& name, double fallback) {
  const Json* v = Opt(j, name);
  return v ? Number(*v, name) : fallback;
}
inline bool OptBool(const Json& j, const std::string& name, bool fallback) {
  const Json* v = Opt(j, name);
  return v ? Bool(*v, name) : fallback;
}
inline std::string OptString(const Json& j, const std::string& name, std::string fallback) {
  const Json* v = Opt(j, name);
  return v ? String(*v, name) : std::move(fallback);
}
inline std::uint64_t OptUint(const Json& j, const std::string& name, std::uint64_t fallback) {
  const Json* v = Opt(j, name);
  return v ? Uint(*v, name) : fallback;
}

inline const Json& Array(const Json& v, const std::string& name) {
  if (!v.is_array()) Fail("field '" + name + "' must be an array");
  return v;
}
inline const Json& Object(const Json& v, const std::string& name) {
  if (!v.is_object()) Fail("field '" + name + "' must be an object");
  return v;
}

// Numbers that may be infinite are written as the string "inf".
inline Json NumberOrInf(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return Json(x);
}

// Runs `fn`, prefixing any schema error with `path`.
template <typename Fn>
auto WithPath(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSchemaError && e.code() != ErrorCode::kMalformedStatement &&
        e.code() != ErrorCode::kInvalidArgument && e.code() != ErrorCode::kWeightSumViolation) {
      throw;
    }
    std::string msg = e.what();
    // Strip the "module.code: " prefix so nested paths read cleanly.
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw Error(ErrorCode::kSchemaError, path + ": " + msg);
  }
}

}  // namespace truthstd::fields
