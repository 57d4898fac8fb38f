// Acceptance gate: one pass/fail line per criterion; exit 0 only when every
// criterion passes.

#include <cstdio>

#include "qplab/acceptance.hpp"

int main() {
  const auto results = qplab::acceptance::run_suite();
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s criterion %2d [%s] %s (%.1f s)%s%s\n",
                r.passed ? "PASS" : "FAIL", r.id, r.tag.c_str(),
                r.name.c_str(), r.seconds, r.detail.empty() ? "" : " - ",
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
