#include <iostream>
#include <string>
#include <vector>

#include "dwq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dwq::run_cli(args, std::cout, std::cerr);
}
