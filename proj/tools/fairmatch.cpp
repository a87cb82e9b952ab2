#include "fairmatch/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fairmatch::run_cli(argc, argv, std::cout, std::cerr); }
