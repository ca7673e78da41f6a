#include <iostream>

#include "epsim/cli.hpp"

int main(int argc, char** argv) { return epsim::run_cli(argc, argv, std::cout, std::cerr); }
