#include <iostream>

#include "classlang/cli.hpp"

int main(int argc, char** argv) {
  return classlang::cli::main(argc, argv, std::cout, std::cerr);
}
