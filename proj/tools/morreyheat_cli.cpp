#include <iostream>
#include <string>
#include <vector>

#include "morreyheat/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return morreyheat::cli::run(args, std::cout, std::cerr);
}
