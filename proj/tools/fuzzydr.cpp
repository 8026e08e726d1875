#include <iostream>
#include <string>
#include <vector>

#include "fuzzydr/commands.hpp"

int main(int argc, char** argv) {
  return fuzzydr::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
