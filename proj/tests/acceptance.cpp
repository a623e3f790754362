#include "epistrict/acceptance.hpp"

#include <iostream>

int main() {
  using namespace epistrict::acceptance;
  bool ok = true;
  std::cout << "seed " << seed() << std::endl;
  for (int id : suite("all")) {
    try {
      const auto c = run({id}).front();
      std::cout << summary_line(c) << std::endl;
      ok = ok && c.pass();
    } catch (const std::exception& e) {
      std::cout << "FAIL  criterion " << id << ": error: " << e.what() << std::endl;
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
