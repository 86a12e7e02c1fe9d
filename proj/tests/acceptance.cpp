// Acceptance suite: one PASS/FAIL line per criterion with indented sub-checks.
// Usage: acceptance [--only key-or-number[,...]] [--seed N]
#include <cstring>
#include <iostream>

#include "lie_eigenlab/app/acceptance.hpp"
#include "lie_eigenlab/app/config.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only;
  std::uint64_t seed = 1;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      for (auto& s : lie::app::split_list(argv[++i])) only.push_back(s);
    } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only key-or-number[,...]] [--seed N]\n";
      return 2;
    }
  }
  std::vector<int> ids;
  try {
    ids = lie::app::select_criteria(only);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  int failed = 0;
  for (int id : ids) {
    const auto r = lie::app::run_criterion(id, seed);
    std::cout << lie::app::format_criterion(r) << std::flush;
    if (!r.passed()) ++failed;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " of " + std::to_string(ids.size()) +
                                                " criteria FAILED")
            << "\n";
  return failed == 0 ? 0 : 1;
}
