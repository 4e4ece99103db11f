#include <iostream>

#include "ramzi/cli.hpp"

int main(int argc, char** argv) { return ramzi::run_command(argc, argv, std::cout, std::cerr); }
