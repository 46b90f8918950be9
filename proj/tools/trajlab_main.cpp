#include "trajlab/cli.hpp"

int main(int argc, char** argv) {
  return trajlab::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
