// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Helpers shared by the JSON-backed file readers. Not installed.

#ifndef MSTPATH_SRC_JSON_UTIL_H_
#define MSTPATH_SRC_JSON_UTIL_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "mstpath/types.h"

namespace mstpath::internal {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Parses `text`; syntax errors become Error(kParse) with line and column.
Json ParseJson(std::string_view text, std::string_view what);

// Field accessors that report the dotted field path on failure.
const Json& Require(const Json& obj, const char* key, const std::string& path);
std::string RequireString(const Json& obj, const char* key,
                          const std::string& path);
long long RequireInt(const Json& obj, const char* key, const std::string& path);

// Integer, decimal or "p/q" string. Decimal JSON numbers are converted from
// their shortest round-trip spelling so "0.1" becomes exactly 1/10.
Rational JsonToRational(const Json& value, const std::string& path);
double JsonToDouble(const Json& value, const std::string& path);

// Rational as a JSON value: an integer when whole, else a "p/q" string.
OrderedJson RationalToJson(const Rational& r);

}  // namespace mstpath::internal

#endif  // MSTPATH_SRC_JSON_UTIL_H_
