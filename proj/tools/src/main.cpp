#include <iostream>

#include "ddoco_cli/cli.hpp"

int main(int argc, char** argv) { return ddoco::cli::cli_main(argc, argv, std::cout, std::cerr); }
