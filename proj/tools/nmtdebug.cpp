#include <iostream>

#include "nmtdebug/cli.hpp"

int main(int argc, char **argv) { return nmtdebug::cli::run(argc, argv, std::cout, std::cerr); }
