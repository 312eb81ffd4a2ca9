#include <iostream>

#include "passfeas/cli.hpp"

int main(int argc, char** argv) { return passfeas::run_cli(argc, argv, std::cout, std::cerr); }
