#include "ivexpand/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ivexpand::run_cli(argc, argv, std::cout, std::cerr);
}
