#include <iostream>

#include "cdstab/cli.hpp"

int main(int argc, char** argv) { return cdstab::run_cli(argc, argv, std::cout, std::cerr); }
