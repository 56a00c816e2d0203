#include <iostream>

#include "wkm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wkm::cli::run(args, std::cout, std::cerr);
}
