#include <iostream>

#include "isophote/cli.hpp"

int main(int argc, char** argv) { return isophote::cli::main_entry(argc, argv, std::cout, std::cerr); }
