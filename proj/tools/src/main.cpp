#include <iostream>

#include "slrgdp_cli/cli.hpp"

int main(int argc, char** argv) {
  return slrgdp::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
