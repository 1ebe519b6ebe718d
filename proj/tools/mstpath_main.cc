// Copyright 2026-present The mstpath Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "mstpath/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mstpath::RunCli(args, std::cout, std::cerr);
}
