#include <iostream>

#include "fhkh/cli.hpp"

int main(int argc, char** argv) { return fhkh::cli::run(argc, argv, std::cout, std::cerr); }
