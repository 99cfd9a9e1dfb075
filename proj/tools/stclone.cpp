#include <iostream>
#include <string>
#include <vector>

#include "stclone/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return stclone::run_cli(args, std::cout, std::cerr);
}
