#include <iostream>

#include "hclab/cli.hpp"

int main(int argc, char** argv) {
  return hclab::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
