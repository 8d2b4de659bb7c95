#include <iostream>

#include "gencluster/cli.hpp"

int main(int argc, char** argv) { return gencluster::cli::run(argc, argv, std::cout, std::cerr); }
