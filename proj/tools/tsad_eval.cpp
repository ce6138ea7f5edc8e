#include <iostream>

#include "tsad/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tsad::cli::run(std::move(args), std::cout, std::cerr);
}
