#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return padic_cf::cli::run(argc, argv, std::cout, std::cerr); }
