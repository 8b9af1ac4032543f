#include <iostream>

#include "fedcomp/cli/commands.hpp"

int main(int argc, char** argv) { return fedcomp::cli::main_entry(argc, argv, std::cout, std::cerr); }
