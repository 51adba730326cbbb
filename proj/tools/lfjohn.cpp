#include "lfjohn_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lfjohn::cli::run(std::move(args));
}
