#include <iostream>

#include "isd/cli.hpp"

int main(int argc, char** argv) { return isd::run_cli(argc, argv, std::cout, std::cerr); }
