#include <iostream>
#include <string>
#include <vector>

#include "spreadsmith/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return spreadsmith::run_cli(args, std::cout, std::cerr);
}
