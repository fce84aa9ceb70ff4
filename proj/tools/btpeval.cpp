#include <iostream>
#include <string>
#include <vector>

#include "btp/cli.hpp"

int main(int argc, char** argv) {
  return btp::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
