#include <iostream>
#include <string>
#include <vector>

#include "freelunch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return freelunch::run_cli(args, std::cout, std::cerr);
}
