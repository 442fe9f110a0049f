#include "lcc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lcc::run_cli(argc, argv, std::cout, std::cerr); }
