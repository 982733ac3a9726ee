#include <iostream>

#include "sharpsum/cli.hpp"

int main(int argc, char** argv) { return sharpsum::cli_main(argc, argv, std::cout, std::cerr); }
