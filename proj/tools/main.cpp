#include <iostream>

#include "omnimod/commands.hpp"

int main(int argc, char** argv)
{
  return omnimod::cli_main(argc, argv, std::cout, std::cerr);
}
