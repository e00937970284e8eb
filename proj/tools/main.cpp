#include <iostream>
#include <vector>

#include "linref/cli.hpp"

int main(int argc, char** argv) {
  return linref::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                         std::cerr);
}
