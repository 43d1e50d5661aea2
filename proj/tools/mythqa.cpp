#include <iostream>

#include "mythqa/cli.hpp"

int main(int argc, char** argv) {
  return mythqa::cli::run(argc, argv, std::cout, std::cerr);
}
