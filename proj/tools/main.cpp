#include <iostream>

#include "multispec/cli.hpp"

int main(int argc, char** argv) {
  return multispec::cli::run(argc, argv, std::cout, std::cerr);
}
