#include <iostream>
#include <string>
#include <vector>

#include "effdf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return effdf::cli::run(args, std::cout, std::cerr);
}
