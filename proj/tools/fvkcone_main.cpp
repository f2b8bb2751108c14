#include <cstdio>

int main() {
  std::puts("fvkcone: command-line interface not wired up yet");
  return 0;
}
