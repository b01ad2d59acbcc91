#include <iostream>

#include "volkit/cli.hpp"

int main(int argc, char** argv) { return volkit::run_cli(argc, argv, std::cout, std::cerr); }
