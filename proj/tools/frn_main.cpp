#include <vector>

#include "frn/cli.hpp"

int main(int argc, char** argv) {
  return frn::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
