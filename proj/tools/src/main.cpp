#include <iostream>
#include <string>
#include <vector>

#include "sl2lab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sl2lab::cli::run(args, std::cout, std::cerr);
}
