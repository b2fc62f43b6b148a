#include <iostream>

#include "hypint/cli.hpp"

int main(int argc, char** argv) { return hypint::run_cli(argc, argv, std::cout, std::cerr); }
