#include <iostream>

#include "pbqct/cli.hpp"

int main(int argc, char** argv) { return pbqct::run_cli(argc, argv, std::cout, std::cerr); }
