#include <iostream>

#include "fraclap/cli.hpp"

int main(int argc, char** argv) { return fraclap::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
