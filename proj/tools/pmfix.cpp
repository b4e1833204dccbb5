#include <iostream>

#include "pmfix/cli.hpp"

int main(int argc, char** argv) { return pmfix::run_cli(argc, argv, std::cout, std::cerr); }
