#include <iostream>

#include "schurfact/cli/commands.hpp"

int main(int argc, char** argv) { return schurfact::cli::run(argc, argv, std::cout, std::cerr); }
