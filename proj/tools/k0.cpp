#include <iostream>
#include <string>
#include <vector>

#include "k0_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return k0::cli::run_cli(std::move(args), std::cin, std::cout, std::cerr);
}
