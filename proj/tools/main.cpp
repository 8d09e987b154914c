#include <iostream>

#include "cew/cli.hpp"

int main(int argc, char** argv) { return cew::run(argc, argv, std::cout, std::cerr); }
