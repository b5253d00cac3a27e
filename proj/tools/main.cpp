#include <iostream>

#include "abuse/cli.hpp"

int main(int argc, char** argv) { return abuse::run_cli(argc, argv, std::cout, std::cerr); }
