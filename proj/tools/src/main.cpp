#include <iostream>

#include "specshift_cli/runners.hpp"

int main(int argc, char** argv) { return specshift::cli::run_cli(argc, argv, std::cout, std::cerr); }
