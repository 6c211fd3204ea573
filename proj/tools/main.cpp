#include <iostream>

#include "opinion/cli.hpp"

int main(int argc, char** argv) {
  return opinion::run_cli(argc, argv, std::cout, std::cerr);
}
