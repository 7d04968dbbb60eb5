#include <iostream>

#include "pace/cli.hpp"

int main(int argc, char** argv) {
    return pace::cli::main(argc, argv, std::cout, std::cerr);
}
