// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: ptone_acceptance [filter]

#include <iostream>
#include <string>

#include "ptone/errors.hpp"
#include "ptone/harness/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  ptone::harness::AcceptanceContext ctx;
  try {
    const auto rep = ptone::harness::run_acceptance(filter, ctx, &std::cout);
    std::cout << "total " << rep.seconds << " s\n";
    return rep.all_pass() ? 0 : 1;
  } catch (const ptone::InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
