#include <iostream>
#include <vector>

#include "qev/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qev::harness::run_cli(args, std::cout, std::cerr);
}
