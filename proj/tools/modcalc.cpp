#include "modcalc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return modcalc::cli::main(argc, argv, std::cout, std::cerr); }
