#include <iostream>

#include "frmod/cli/commands.hpp"

int main(int argc, char** argv) { return frmod::cli::run(argc, argv, std::cout, std::cerr); }
