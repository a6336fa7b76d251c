#include <iostream>

#include "treemix/cli.hpp"

int main(int argc, char** argv) {
  return treemix::cli::run(argc, argv, std::cout, std::cerr);
}
