#include "adfric/scenarios.hpp"

#include <cstdio>

int main() {
  std::printf("acceptance suite placeholder\n");
  return 0;
}
