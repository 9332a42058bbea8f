#include <iostream>

#include "msadl_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return msadl::cli::cli_dispatch(args, std::cout, std::cerr);
}
