#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shocklab/laplace.hpp"
#include "shocklab/limit_process.hpp"
#include "shocklab/params.hpp"

namespace shocklab {

struct SimulationPlan {
  RateParams params;
  int n = 10;
  long burn_in_events = 0;  // 0 selects 20 n^2
  long samples = 1000;
  long thin_events = 0;     // 0 selects 5 n
  std::uint64_t seed = 1;
};

// Stationary samples from one or more independent replicas. Configurations
// are read at fixed continuous-time intervals (thin_events divided by the
// event rate measured during burn-in), so the sample law is the
// continuous-time stationary law and not that of the jump chain.
struct SampleSet {
  int n = 0;
  std::vector<std::vector<std::uint8_t>> configs;
  std::vector<int> replica;  // replica index of each sample
  long events = 0;
  long left_hops = 0;
  double sample_dt = 0.0;    // of the last replica

  std::size_t size() const { return configs.size(); }
};

SampleSet simulate(const SimulationPlan& plan);
// Independent replicas with seeds derived from (seed, replica); plan.samples
// per replica. Results are concatenated in replica order.
SampleSet simulate_replicas(const SimulationPlan& plan, int replicas, int workers = 0);

// h_n(floor(n x)) for one configuration.
long height_at(const std::vector<std::uint8_t>& config, double x);

// Mean of exp(-sum_k c_k h_n(x_k) / sqrt n) with a 16-batch batch-means SE
// over the sample sequence (with 16 replicas each batch is one replica).
Estimate empirical_height_laplace(const SampleSet& s, const LaplaceRequest& req);
// Per-site occupation means with batch-means SE.
std::vector<Estimate> empirical_densities(const SampleSet& s);

struct ConvergenceRow {
  long n = 0;
  Estimate empirical;
  double prelimit = 0.0;      // Phi/Z by quadrature, NaN if unavailable
  double limit = 0.0;
  double gap = 0.0;           // |empirical - limit|
  std::string note;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool gaps_decreasing() const;
  std::string to_csv(const LaplaceRequest& req) const;
};

struct ExperimentBudget {
  long samples_per_replica = 640;
  int replicas = 16;
  double burn_in_factor = 20.0;  // burn-in events = factor * n^2
  double thin_factor = 5.0;      // thin events = factor * n
  long prelimit_max_n = 2000;    // skip the quadrature above this size
  int workers = 0;
};

ConvergenceTable convergence_experiment(const ScalingLimitParams& s, const std::vector<long>& n_list,
                                        const LaplaceRequest& req, const ExperimentBudget& budget,
                                        std::uint64_t seed);
// Several requests evaluated on one shared set of simulations per n.
std::vector<ConvergenceTable> convergence_experiment(const ScalingLimitParams& s,
                                                     const std::vector<long>& n_list,
                                                     const std::vector<LaplaceRequest>& reqs,
                                                     const ExperimentBudget& budget, std::uint64_t seed);

}  // namespace shocklab
