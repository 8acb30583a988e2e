#include <iostream>
#include <string>
#include <vector>

#include "fsw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fsw::run_cli(args, std::cout, std::cerr);
}
