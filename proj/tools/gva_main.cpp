#include <string>
#include <vector>

#include "gva/cli.hpp"

int main(int argc, char** argv) {
  return gva::cli_run(std::vector<std::string>(argv, argv + argc));
}
