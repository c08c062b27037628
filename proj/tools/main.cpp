#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::optional<std::string> env_seed;
  if (const char* s = std::getenv("EQONE_SEED")) env_seed = s;
  return eqone::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr, env_seed);
}
