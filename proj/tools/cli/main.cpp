#include <iostream>
#include <string>
#include <vector>

#include "manna/app/cli.hpp"

int main(int argc, char** argv) {
  return manna::app::run_cli(std::vector<std::string>(argv, argv + argc), std::cin, std::cout, std::cerr);
}
