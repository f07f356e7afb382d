#include <string>
#include <vector>

#include "jsr/cli.hpp"

int main(int argc, char** argv) {
  return jsr::cli::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
