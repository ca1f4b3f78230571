#include <iostream>

#include "mll/harness.hpp"

int main(int argc, char** argv) { return mll::run_cli(argc, argv, std::cout, std::cerr); }
