#include <iostream>
#include <string>
#include <vector>

#include "bayesfair_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bayesfair::cli::run(args, std::cout, std::cerr);
}
