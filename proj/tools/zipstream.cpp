#include <iostream>

#include "zipstream/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zs::run_cli(args, std::cout, std::cerr);
}
