#include <iostream>

#include "renyiq/cli.hpp"

int main(int argc, char** argv) {
  return renyiq::run_cli(argc, argv, std::cout, std::cerr);
}
