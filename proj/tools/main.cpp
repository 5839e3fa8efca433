#include <iostream>

#include "pfno_cli/run_command.hpp"

int main(int argc, char** argv) {
  return pfno::cli::run_command(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
