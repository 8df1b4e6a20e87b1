// SPDX-License-Identifier: Apache-2.0

#include "fakepath/cli.hpp"

int main(int argc, char** argv) { return fakepath::cli::main_entry(argc, argv); }
