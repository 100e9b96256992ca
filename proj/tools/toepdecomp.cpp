#include <iostream>

#include "toepdecomp/cli.hpp"

int main(int argc, char** argv) {
  return toepdecomp::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
