#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return unidemand::cli::run(argc, argv, std::cout, std::cerr); }
