#include <string>
#include <vector>

#include "gsana/cli.h"

int main(int argc, char** argv) {
  return gsana::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
