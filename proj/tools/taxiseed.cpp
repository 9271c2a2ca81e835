#include <iostream>

#include "taxiseed/cli.hpp"

int main(int argc, char** argv) {
    return taxiseed::cli::run(argc, argv, std::cout, std::cerr);
}
