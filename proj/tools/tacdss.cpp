#include <iostream>
#include <string>
#include <vector>

#include "tacdss/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tacdss::cli::run(args, std::cout, std::cerr);
}
