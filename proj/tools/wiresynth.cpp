#include "wiresynth/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wiresynth::run_cli(argc, argv, std::cout, std::cerr); }
