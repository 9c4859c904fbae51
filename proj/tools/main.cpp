#include <iostream>

#include "skel/cli.hpp"

int main(int argc, char** argv) { return skel::cli::run(argc, argv, std::cout, std::cerr); }
