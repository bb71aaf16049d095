#include <iostream>
#include <string>
#include <vector>

#include "epx/cli.hpp"

int main(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return epx::cli::run(args, std::cout, std::cerr);
}
