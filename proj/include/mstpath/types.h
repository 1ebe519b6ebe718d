// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

// Value types shared by every module: addresses, exact weights, errors.

#ifndef MSTPATH_TYPES_H_
#define MSTPATH_TYPES_H_

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace mstpath {

// Exact link weights; ties must compare equal, so no floating point here.
using Rational = boost::rational<std::int64_t>;

enum class ErrorCode {
  kParse,
  kValidation,
  kUnknownNode,
  kDisconnectedGraph,
  kTooLarge,
  kUnknownRoot,
  kUnreachableHost,
  kUnknownSwitch,
  kUnknownAction,
  kMissingHeader,
  kUnknownStation,
  kEmptyCoverage,
  kStationOutsideCoverage,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class Ipv4Addr {
 public:
  constexpr Ipv4Addr() = default;
  constexpr explicit Ipv4Addr(std::uint32_t value) : value_(value) {}

  // Dotted quad; throws Error(kParse) on anything else.
  static Ipv4Addr Parse(std::string_view text);

  constexpr std::uint32_t value() const { return value_; }
  std::string ToString() const;

  // Address with the bits beyond `prefix_len` cleared.
  Ipv4Addr Masked(int prefix_len) const;

  friend constexpr auto operator<=>(Ipv4Addr, Ipv4Addr) = default;

 private:
  std::uint32_t value_ = 0;
};

class MacAddr {
 public:
  constexpr MacAddr() = default;
  constexpr explicit MacAddr(std::uint64_t value)
      : value_(value & 0xffffffffffffULL) {}

  // Six colon-separated hex octets, either case.
  static MacAddr Parse(std::string_view text);

  constexpr std::uint64_t value() const { return value_; }
  // Lowercase, colon-separated.
  std::string ToString() const;

  friend constexpr auto operator<=>(MacAddr, MacAddr) = default;

 private:
  std::uint64_t value_ = 0;
};

// Accepts "7", "2.5", "3/2". Throws Error(kParse).
Rational ParseRational(std::string_view text);
// "7" for integers, "p/q" otherwise.
std::string FormatRational(const Rational& r);
double ToDouble(const Rational& r);

}  // namespace mstpath

template <>
struct std::hash<mstpath::Ipv4Addr> {
  std::size_t operator()(mstpath::Ipv4Addr a) const noexcept {
    return std::hash<std::uint32_t>{}(a.value());
  }
};

#endif  // MSTPATH_TYPES_H_
