#include <iostream>

#include "csym/cli.hpp"

int main(int argc, char** argv) { return csym::cli::run(argc, argv, std::cout, std::cerr); }
