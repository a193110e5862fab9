#include <iostream>

#include "susyritus/cli.hpp"

int main(int argc, char** argv) { return susyritus::cli::run(argc, argv, std::cout, std::cerr); }
