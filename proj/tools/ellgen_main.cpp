#include <iostream>

#include "ellgen/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ellgen::run_cli(args, std::cout, std::cerr);
}
