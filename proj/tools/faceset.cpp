// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <string>
#include <vector>

#include "faceset/cli.hpp"

int main(int argc, char** argv) {
    faceset::cli::configure_logging();
    const std::vector<std::string> args(argv + 1, argv + argc);
    return faceset::cli::run(args, std::cout, std::cerr);
}
