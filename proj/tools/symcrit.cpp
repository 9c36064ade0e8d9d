#include <iostream>

#include "symcrit/cli/runner.hpp"

int main(int argc, char** argv) { return symcrit::cli::run(argc, argv, std::cout, std::cerr); }
