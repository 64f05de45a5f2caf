#include <iostream>
#include <string>
#include <vector>

#include "ucm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ucm::run_cli(args, std::cout, std::cerr, ucm::CliEnvironment::from_process());
}
