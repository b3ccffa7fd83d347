#include <iostream>

#include "gimg/cli.hpp"

int main(int argc, char** argv) { return gimg::run(argc, argv, std::cout, std::cerr); }
