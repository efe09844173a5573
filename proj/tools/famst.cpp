#include <iostream>

#include "famst/cli.hpp"

int main(int argc, char** argv) { return famst::cli::run(argc, argv, std::cout, std::cerr); }
