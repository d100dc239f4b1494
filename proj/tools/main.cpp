#include <iostream>

#include "tt/harness/cli.hpp"

int main(int argc, char** argv) { return tt::harness::run_cli(argc, argv, std::cout, std::cerr); }
