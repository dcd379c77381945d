// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "citeaccel/cli.hpp"

int main(int argc, char** argv) {
  return citeaccel::cli_run({argv + 1, argv + argc}, std::cout, std::cerr);
}
