#include <iostream>

#include "gapcount/cli/runner.hpp"

int main(int argc, char** argv) { return gapcount::cli::main_entry(argc, argv, std::cout, std::cerr); }
