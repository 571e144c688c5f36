#include <iostream>

#include "qfield/io/cli.hpp"

int main(int argc, char** argv) { return qfield::io::run_cli(argc, argv, std::cout, std::cerr); }
