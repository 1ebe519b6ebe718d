// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include "mstpath/types.h"

#include <charconv>
#include <cstdio>
#include <limits>

namespace mstpath {

namespace {

bool ParseUint(std::string_view text, std::uint64_t* out, int base = 10) {
  if (text.empty()) return false;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), *out, base);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnknownRoot: return "UnknownRoot";
    case ErrorCode::kUnreachableHost: return "UnreachableHost";
    case ErrorCode::kUnknownSwitch: return "UnknownSwitch";
    case ErrorCode::kUnknownAction: return "UnknownAction";
    case ErrorCode::kMissingHeader: return "MissingHeader";
    case ErrorCode::kUnknownStation: return "UnknownStation";
    case ErrorCode::kEmptyCoverage: return "EmptyCoverage";
    case ErrorCode::kStationOutsideCoverage: return "StationOutsideCoverage";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

Ipv4Addr Ipv4Addr::Parse(std::string_view text) {
  std::uint32_t value = 0;
  std::string_view rest = text;
  for (int i = 0; i < 4; ++i) {
    auto dot = rest.find('.');
    std::string_view octet = i < 3 ? rest.substr(0, dot) : rest;
    if ((i < 3 && dot == std::string_view::npos) || octet.size() > 3) {
      throw Error(ErrorCode::kParse,
                  "bad IPv4 address '" + std::string(text) + "'");
    }
    std::uint64_t v;
    if (!ParseUint(octet, &v) || v > 255) {
      throw Error(ErrorCode::kParse,
                  "bad IPv4 address '" + std::string(text) + "'");
    }
    value = (value << 8) | static_cast<std::uint32_t>(v);
    if (i < 3) rest = rest.substr(dot + 1);
  }
  return Ipv4Addr(value);
}

std::string Ipv4Addr::ToString() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (value_ >> 24) & 0xff,
                (value_ >> 16) & 0xff, (value_ >> 8) & 0xff, value_ & 0xff);
  return buf;
}

Ipv4Addr Ipv4Addr::Masked(int prefix_len) const {
  if (prefix_len <= 0) return Ipv4Addr(0);
  if (prefix_len >= 32) return *this;
  std::uint32_t mask = ~std::uint32_t{0} << (32 - prefix_len);
  return Ipv4Addr(value_ & mask);
}

MacAddr MacAddr::Parse(std::string_view text) {
  std::uint64_t value = 0;
  std::string_view rest = text;
  for (int i = 0; i < 6; ++i) {
    auto colon = rest.find(':');
    std::string_view octet = i < 5 ? rest.substr(0, colon) : rest;
    std::uint64_t v;
    if ((i < 5 && colon == std::string_view::npos) || octet.size() != 2 ||
        !ParseUint(octet, &v, 16)) {
      throw Error(ErrorCode::kParse,
                  "bad MAC address '" + std::string(text) + "'");
    }
    value = (value << 8) | v;
    if (i < 5) rest = rest.substr(colon + 1);
  }
  return MacAddr(value);
}

std::string MacAddr::ToString() const {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x",
                static_cast<unsigned>((value_ >> 40) & 0xff),
                static_cast<unsigned>((value_ >> 32) & 0xff),
                static_cast<unsigned>((value_ >> 24) & 0xff),
                static_cast<unsigned>((value_ >> 16) & 0xff),
                static_cast<unsigned>((value_ >> 8) & 0xff),
                static_cast<unsigned>(value_ & 0xff));
  return buf;
}

Rational ParseRational(std::string_view text) {
  auto fail = [&]() {
    return Error(ErrorCode::kParse,
                 "bad rational number '" + std::string(text) + "'");
  };
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    text.remove_prefix(1);
  }
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    if (!ParseUint(text.substr(0, slash), &num) ||
        !ParseUint(text.substr(slash + 1), &den) || den == 0) {
      throw fail();
    }
  } else {
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw fail();
    if (!whole.empty() && !ParseUint(whole, &num)) throw fail();
    if (dot != std::string_view::npos) {
      std::uint64_t f = 0;
      if (!ParseUint(frac, &f) || frac.size() > 15) throw fail();
      for (std::size_t i = 0; i < frac.size(); ++i) {
        if (num > std::numeric_limits<std::int64_t>::max() / 10) throw fail();
        num *= 10;
        den *= 10;
      }
      num += f;
    }
  }
  if (num > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
    throw fail();
  auto n = static_cast<std::int64_t>(num);
  return Rational(negative ? -n : n, static_cast<std::int64_t>(den));
}

std::string FormatRational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double ToDouble(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

}  // namespace mstpath
