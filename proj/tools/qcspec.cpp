#include <iostream>

#include "qcspec/cli.hpp"

int main(int argc, char** argv) { return qcs::run_cli(argc, argv, std::cout, std::cerr); }
