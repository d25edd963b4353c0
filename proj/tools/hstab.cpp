#include <iostream>

#include "hstab/cli.hpp"

int main(int argc, char** argv) { return hstab::run_cli(argc, argv, std::cout, std::cerr); }
