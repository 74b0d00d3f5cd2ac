#include <iostream>

#include "stopctl/cli.hpp"

int main(int argc, char** argv) { return stopctl::cli::run(argc, argv, std::cout, std::cerr); }
