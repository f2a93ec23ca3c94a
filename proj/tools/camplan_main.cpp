#include <iostream>
#include <string>
#include <vector>

#include "camplan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return camplan::cli::run(args, std::cout, std::cerr);
}
