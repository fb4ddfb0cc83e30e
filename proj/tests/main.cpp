#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <iostream>

#include "support.hpp"

int main(int argc, char** argv) {
  std::cout << "DOTS_SEED=" << dots::test::seed() << "\n";
  doctest::Context context(argc, argv);
  return context.run();
}
