#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include <gtest/gtest.h>

#include "support.hpp"

namespace {
std::uint64_t g_seed = 20240601;
}

std::uint64_t b0kit::test::seed() { return g_seed; }

int main(int argc, char** argv) {
  if (const char* env = std::getenv("B0KIT_SEED")) g_seed = std::stoull(env);
  ::testing::InitGoogleTest(&argc, argv);
  for (int i = 1; i < argc; ++i)
    if (std::strncmp(argv[i], "--seed=", 7) == 0) g_seed = std::stoull(argv[i] + 7);
  std::cout << "seed " << g_seed << "\n";
  return RUN_ALL_TESTS();
}
