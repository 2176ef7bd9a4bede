#include <string>
#include <vector>

#include "sifdecay/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sifdecay::run_cli(args);
}
