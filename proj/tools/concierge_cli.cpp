#include "concierge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return concierge::cli::run(argc, argv, std::cout, std::cerr); }
