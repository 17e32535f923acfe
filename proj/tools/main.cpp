#include <iostream>

#include "personrec/cli.hpp"

int main(int argc, char** argv) { return personrec::run_cli(argc, argv, std::cout, std::cerr); }
