#include <iostream>

#include "nclp/cli.hpp"

int main(int argc, char** argv) { return nclp::run_cli(argc, argv, std::cout, std::cerr); }
