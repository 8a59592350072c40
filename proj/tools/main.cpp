#include <iostream>
#include <string>
#include <vector>

#include "abvr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return abvr::run_cli(args, std::cout, std::cerr);
}
