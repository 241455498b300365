#include <iostream>

#include "msc/cli.hpp"

int main(int argc, char** argv) {
  return msc::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
