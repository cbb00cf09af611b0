#include <iostream>
#include <string>
#include <vector>

#include "nematic_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nematic::cli::run(args, std::cout, std::cerr);
}
