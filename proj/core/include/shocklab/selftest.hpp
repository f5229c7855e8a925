#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shocklab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string summary;              // one line
  std::vector<std::string> detail;  // offending cases and diagnostics
  double seconds = 0.0;
};

struct SelftestOptions {
  std::uint64_t seed = 20240611;
  int workers = 0;
  // Monte Carlo budget for the desk-scale convergence check
  long mc_samples_per_replica = 625;
  int mc_replicas = 16;
  double mc_burn_in_factor = 40.0;
  double mc_thin_factor = 100.0;
  std::vector<int> only;  // empty runs everything
};

int selftest_criteria_count();
CriterionResult run_criterion(int id, const SelftestOptions& opt);
std::vector<CriterionResult> run_selftest(const SelftestOptions& opt,
                                          const std::function<void(const CriterionResult&)>& on_done = {});

}  // namespace shocklab
