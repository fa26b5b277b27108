#include <iostream>

#include "mecsim/cli.hpp"

int main(int argc, char** argv) { return mecsim::run_cli(argc, argv, std::cout, std::cerr); }
