#include <iostream>

#include "kdvnf/cli.hpp"

int main(int argc, char** argv) { return kdvnf::cli_main(argc, argv, std::cout, std::cerr); }
