#include <iostream>

#include "metasim/sim/cli.hpp"

int main(int argc, char** argv) {
    return metasim::sim::cli_main(argc, argv, std::cout, std::cerr);
}
