// Runs the acceptance criteria and prints one verdict line per criterion.
// Optional arguments restrict the run to the given criterion ids.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "shocklab/selftest.hpp"

int main(int argc, char** argv) {
  shocklab::SelftestOptions opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  shocklab::run_selftest(opt, [&](const shocklab::CriterionResult& r) {
    std::printf("criterion %d %s (%.1fs) %s: %s\n", r.id, r.passed ? "PASS" : "FAIL", r.seconds,
                r.title.c_str(), r.summary.c_str());
    for (const auto& line : r.detail) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d of %zu criteria failed\n", failed, opt.only.empty() ? std::size_t{9} : opt.only.size());
  return failed == 0 ? 0 : 1;
}
