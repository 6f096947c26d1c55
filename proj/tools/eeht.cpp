#include "eeht/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return eeht::cli::run(argc, argv, std::cout, std::cerr); }
