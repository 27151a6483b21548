#include <iostream>

#include "idnc_cli.hpp"

int main(int argc, char **argv) { return idnc::cli::run(argc, argv, std::cout, std::cerr); }
