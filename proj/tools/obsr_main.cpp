#include <iostream>
#include <string>
#include <vector>

#include "obsr/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return obsr::cli::run(args, std::cout, std::cerr);
}
