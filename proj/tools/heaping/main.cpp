#include <iostream>

#include "heaping/cli.hpp"

int main(int argc, char** argv) { return heaping::cli::run(argc, argv, std::cout, std::cerr); }
