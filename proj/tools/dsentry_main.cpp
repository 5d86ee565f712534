#include <iostream>
#include <string>
#include <vector>

#include "dsentry/cli.hpp"

int main(int argc, char** argv) {
  return dsentry::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
