#include <iostream>

#include "mcmq/cli.hpp"

int main(int argc, char** argv) {
  return mcmq::cli::run_cli(argc, argv, std::cout, std::cerr);
}
