#include <iostream>
#include <string>
#include <vector>

#include "trunkload/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return trunkload::cli::run(args, std::cout, std::cerr);
}
