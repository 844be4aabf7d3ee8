#include <iostream>
#include <string>
#include <vector>

#include "mgate/cli.h"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mgate::run_cli(args, std::cout, std::cerr);
}
