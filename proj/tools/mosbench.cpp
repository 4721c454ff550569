#include <iostream>

#include "mosbench/cli/commands.hpp"

int main(int argc, char** argv) { return mosbench::cli::run(argc, argv, std::cout, std::cerr); }
