// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MSTPATH_CLI_H_
#define MSTPATH_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace mstpath {

// Exit codes are part of the command-line contract.
enum ExitStatus : int {
  kExitOk = 0,
  kExitInvalid = 1,     // parse or validation failure
  kExitViolation = 2,   // dropped packet, hop limit, jitter bound exceeded
};

// Runs `mstpath <args...>` (args excludes the program name). Human output
// goes to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace mstpath

#endif  // MSTPATH_CLI_H_
