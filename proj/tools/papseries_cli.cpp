#include "papseries/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return papseries::run_cli(argc, argv, std::cout, std::cerr); }
