#include "ldstat/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ldstat::cli::run(argc, argv, std::cout, std::cerr); }
