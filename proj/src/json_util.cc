// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "json_util.h"

#include <charconv>

namespace mstpath::internal {

Json ParseJson(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0,
                                              text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::kParse, std::string(what) + ": line " +
                                       std::to_string(line) + ", column " +
                                       std::to_string(column) + ": " +
                                       e.what());
  }
}

const Json& Require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParse, path + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParse, path + "." + key + ": missing field");
  }
  return *it;
}

std::string RequireString(const Json& obj, const char* key,
                          const std::string& path) {
  const Json& v = Require(obj, key, path);
  if (!v.is_string()) {
    throw Error(ErrorCode::kParse, path + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

long long RequireInt(const Json& obj, const char* key, const std::string& path) {
  const Json& v = Require(obj, key, path);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kParse, path + "." + key + ": expected an integer");
  }
  return v.get<long long>();
}

Rational JsonToRational(const Json& value, const std::string& path) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value.get<double>());
      if (ec != std::errc()) {
        throw Error(ErrorCode::kParse, "unrepresentable number");
      }
      return ParseRational(std::string_view(buf, ptr - buf));
    }
    if (value.is_string()) return ParseRational(value.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  throw Error(ErrorCode::kParse, path + ": expected a number");
}

double JsonToDouble(const Json& value, const std::string& path) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return ToDouble(JsonToRational(value, path));
  throw Error(ErrorCode::kParse, path + ": expected a number");
}

OrderedJson RationalToJson(const Rational& r) {
  if (r.denominator() == 1) return OrderedJson(r.numerator());
  return OrderedJson(FormatRational(r));
}

}  // namespace mstpath::internal
