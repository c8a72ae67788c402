#include <iostream>
#include <string>
#include <vector>

#include "trajpred/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trajpred::cli::run(args, std::cin, std::cout, std::cerr);
}
