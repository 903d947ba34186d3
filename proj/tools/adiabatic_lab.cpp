#include <iostream>

#include "adiabatic/runner.hpp"

int main(int argc, char** argv) { return adiabatic::run_cli(argc, argv, std::cerr); }
