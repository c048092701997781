#include <iostream>
#include <string>
#include <vector>

#include "loopw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return loopw::run_cli(args, std::cout, std::cerr);
}
