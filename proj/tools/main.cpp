#include <iostream>

#include "cvxroof/cli.hpp"

int main(int argc, char** argv) { return cvxroof::cli::run(argc, argv, std::cout, std::cerr); }
