#include <iostream>

#include "qosc/cli.hpp"

int main(int argc, char** argv) { return qosc::cli::main(argc, argv, std::cout, std::cerr); }
