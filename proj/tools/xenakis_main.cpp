#include <iostream>
#include <string>
#include <vector>

#include "xenakis/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return xenakis::cli::run(args, std::cout, std::cerr);
}
