#include <iostream>

#include "edsim/cli.hpp"

int main(int argc, char** argv) { return edsim::run_cli(argc, argv, std::cout, std::cerr); }
