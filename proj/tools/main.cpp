#include <iostream>

#include "hgnn/cli.hpp"

int main(int argc, char** argv) { return hgnn::run_cli(argc, argv, std::cout, std::cerr); }
