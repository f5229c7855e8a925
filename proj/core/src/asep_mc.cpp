#include "shocklab/asep_mc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "shocklab/errors.hpp"
#include "shocklab/parallel.hpp"
#include "shocklab/prelimit.hpp"

namespace shocklab {

namespace {

// Rates of the n + 1 move slots: 0 is the left reservoir, i in 1..n-1 the
// bond (i, i+1), n the right reservoir.
class RateTree {
 public:
  explicit RateTree(int size) : n_(size), tree_(size + 1, 0.0), leaf_(size, 0.0) {}

  void set(int i, double r) {
    const double diff = r - leaf_[i];
    if (diff == 0.0) return;
    leaf_[i] = r;
    for (int k = i + 1; k <= n_; k += k & -k) tree_[k] += diff;
  }
  double total() const {
    double s = 0.0;
    for (int k = n_; k > 0; k -= k & -k) s += tree_[k];
    return s;
  }
  // smallest slot whose prefix sum exceeds u
  int find(double u) const {
    int pos = 0;
    int step = 1;
    while (step * 2 <= n_) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step <= n_ && tree_[pos + step] <= u) {
        pos += step;
        u -= tree_[pos];
      }
    }
    // guard against rounding past the last positive slot
    while (pos < n_ - 1 && leaf_[pos] == 0.0) ++pos;
    while (pos > 0 && leaf_[pos] == 0.0) --pos;
    return pos;
  }
  double leaf(int i) const { return leaf_[i]; }

 private:
  int n_;
  std::vector<double> tree_;
  std::vector<double> leaf_;
};

struct Chain {
  const RateParams& r;
  int n;
  std::vector<std::uint8_t> tau;
  RateTree rates;
  long events = 0;
  long left_hops = 0;

  Chain(const RateParams& rp, int size) : r(rp), n(size), tau(size, 0), rates(size + 1) {
    for (int i = 0; i <= n; ++i) refresh(i);
  }

  // product Bernoulli(1/2) start, closer to the bulk law near the triple point
  // than an empty lattice
  void randomize(std::mt19937_64& rng) {
    for (auto& t : tau) t = static_cast<std::uint8_t>(rng() >> 63);
    for (int i = 0; i <= n; ++i) refresh(i);
  }

  void refresh(int slot) {
    double v = 0.0;
    if (slot == 0) {
      v = tau[0] ? r.gamma : r.alpha;
    } else if (slot == n) {
      v = tau[n - 1] ? r.beta : r.delta;
    } else {
      const int a = tau[slot - 1], b = tau[slot];
      v = (a && !b) ? 1.0 : (!a && b) ? r.q : 0.0;
    }
    rates.set(slot, v);
  }

  void fire(int slot) {
    if (slot == 0) {
      tau[0] ^= 1;
    } else if (slot == n) {
      tau[n - 1] ^= 1;
    } else {
      if (!tau[slot - 1]) ++left_hops;
      std::swap(tau[slot - 1], tau[slot]);
    }
    ++events;
    for (int k = std::max(0, slot - 1); k <= std::min(n, slot + 1); ++k) refresh(k);
  }

  // Advances by one event; returns the holding time before it.
  double step(std::mt19937_64& rng) {
    const double total = rates.total();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double dt = -std::log(1.0 - u01(rng)) / total;
    fire(rates.find(u01(rng) * total));
    return dt;
  }
};

void check_plan(const SimulationPlan& p) {
  validate(p.params);
  if (p.n < 1) throw DomainError("simulate: n must be >= 1");
  if (p.samples < 1) throw DomainError("simulate: need at least one sample");
  if (p.burn_in_events < 0 || p.thin_events < 0) throw DomainError("simulate: negative event counts");
  if (p.thin_events > 0 && p.thin_events < p.n) throw DomainError("simulate: thin_events must be >= n");
  const RateParams& r = p.params;
  if (r.alpha + r.gamma <= 0.0 || r.beta + r.delta <= 0.0)
    throw DomainError("simulate: each reservoir needs a positive rate");
}

SampleSet run_replica(const SimulationPlan& plan, std::uint64_t seed) {
  const long n = plan.n;
  const long burn = plan.burn_in_events > 0 ? plan.burn_in_events : 20 * n * n;
  const long thin = plan.thin_events > 0 ? plan.thin_events : 5 * n;
  std::mt19937_64 rng(seed);
  Chain chain(plan.params, plan.n);
  chain.randomize(rng);
  double t = 0.0;
  for (long e = 0; e < burn; ++e) t += chain.step(rng);
  const double dt = static_cast<double>(thin) * t / static_cast<double>(burn);

  SampleSet out;
  out.n = plan.n;
  out.sample_dt = dt;
  out.configs.reserve(plan.samples);
  // the configuration at time T is the one in force after the last event <= T
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double clock = 0.0;
  double pending = -std::log(1.0 - u01(rng)) / chain.rates.total();
  for (long k = 0; k < plan.samples; ++k) {
    const double target = clock + dt;
    double now = clock;
    while (now + pending <= target) {
      now += pending;
      const double total = chain.rates.total();
      chain.fire(chain.rates.find(u01(rng) * total));
      pending = -std::log(1.0 - u01(rng)) / chain.rates.total();
    }
    // memorylessness: the residual holding time stays exponential
    pending -= target - now;
    clock = target;
    out.configs.push_back(chain.tau);
  }
  out.replica.assign(out.configs.size(), 0);
  out.events = chain.events;
  out.left_hops = chain.left_hops;
  return out;
}

}  // namespace

SampleSet simulate(const SimulationPlan& plan) {
  check_plan(plan);
  return run_replica(plan, plan.seed);
}

SampleSet simulate_replicas(const SimulationPlan& plan, int replicas, int workers) {
  check_plan(plan);
  if (replicas < 1) throw DomainError("simulate_replicas: need at least one replica");
  std::vector<SampleSet> parts(replicas);
  parallel_for(replicas, workers > 0 ? workers : default_workers(), [&](long r) {
    parts[r] = run_replica(plan, stream_seed(plan.seed, static_cast<std::uint64_t>(r)));
  });
  SampleSet out;
  out.n = plan.n;
  for (int r = 0; r < replicas; ++r) {
    for (auto& c : parts[r].configs) {
      out.configs.push_back(std::move(c));
      out.replica.push_back(r);
    }
    out.events += parts[r].events;
    out.left_hops += parts[r].left_hops;
    out.sample_dt = parts[r].sample_dt;
  }
  return out;
}

long height_at(const std::vector<std::uint8_t>& config, double x) {
  const long n = static_cast<long>(config.size());
  const long upto = static_cast<long>(std::floor(static_cast<double>(n) * x + 1e-9));
  long h = 0;
  for (long i = 0; i < std::min(upto, n); ++i) h += 2 * config[i] - 1;
  return h;
}

namespace {

constexpr int kBatches = 16;

Estimate batch_means(const std::vector<double>& f) {
  const std::size_t N = f.size();
  double total = 0.0;
  for (double v : f) total += v;
  const double mean = total / static_cast<double>(N);
  std::vector<double> bm(kBatches, 0.0);
  for (int b = 0; b < kBatches; ++b) {
    const std::size_t lo = N * b / kBatches, hi = N * (b + 1) / kBatches;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f[i];
    bm[b] = s / static_cast<double>(hi - lo);
  }
  double var = 0.0;
  for (double v : bm) var += (v - mean) * (v - mean);
  var /= kBatches - 1;
  return {mean, std::sqrt(var / kBatches)};
}

}  // namespace

Estimate empirical_height_laplace(const SampleSet& s, const LaplaceRequest& req) {
  req.validate();
  if (s.size() < 1000) throw InsufficientSamples("empirical_height_laplace: need >= 1000 samples");
  const double rn = std::sqrt(static_cast<double>(s.n));
  const auto ends = req.block_ends(s.n);
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& cfg = s.configs[i];
    double expo = 0.0;
    long h = 0, pos = 0;
    for (int k = 0; k < req.d(); ++k) {
      for (; pos < ends[k + 1]; ++pos) h += 2 * cfg[pos] - 1;
      expo -= req.c[k] * static_cast<double>(h) / rn;
    }
    f[i] = std::exp(expo);
  }
  return batch_means(f);
}

std::vector<Estimate> empirical_densities(const SampleSet& s) {
  if (s.size() < static_cast<std::size_t>(kBatches))
    throw InsufficientSamples("empirical_densities: need at least 16 samples");
  std::vector<Estimate> out;
  std::vector<double> f(s.size());
  for (int site = 0; site < s.n; ++site) {
    for (std::size_t i = 0; i < s.size(); ++i) f[i] = s.configs[i][site];
    out.push_back(batch_means(f));
  }
  return out;
}

bool ConvergenceTable::gaps_decreasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].gap < rows[i - 1].gap)) return false;
  return true;
}

std::string ConvergenceTable::to_csv(const LaplaceRequest& req) const {
  std::ostringstream out;
  out << "n";
  for (int k = 1; k <= req.d(); ++k) out << ",x" << k;
  for (int k = 1; k <= req.d(); ++k) out << ",c" << k;
  out << ",empirical,stderr,prelimit,limit\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17e", v);
    out << ',' << buf;
  };
  for (const auto& r : rows) {
    out << r.n;
    for (double v : req.x) num(v);
    for (double v : req.c) num(v);
    num(r.empirical.value);
    num(r.empirical.stderr_);
    num(r.prelimit);
    num(r.limit);
    out << '\n';
  }
  return out.str();
}

std::vector<ConvergenceTable> convergence_experiment(const ScalingLimitParams& s,
                                                     const std::vector<long>& n_list,
                                                     const std::vector<LaplaceRequest>& reqs,
                                                     const ExperimentBudget& budget, std::uint64_t seed) {
  std::vector<ConvergenceTable> tables(reqs.size());
  std::vector<double> limits;
  for (const auto& req : reqs) {
    req.validate();
    limits.push_back(limit_height_laplace({s.a_lim, s.c_lim}, req.x, req.c));
  }
  for (long n : n_list) {
    if (n < 1) throw DomainError("convergence_experiment: n must be >= 1");
    const ScaledBoundary sb = scaling_sequence(s, n);
    SimulationPlan plan;
    plan.params = boundary_to_rates(sb.params);
    plan.n = static_cast<int>(n);
    plan.burn_in_events = std::max<long>(1, static_cast<long>(budget.burn_in_factor * double(n) * double(n)));
    plan.thin_events = std::max<long>(n, static_cast<long>(budget.thin_factor * double(n)));
    plan.samples = budget.samples_per_replica;
    plan.seed = stream_seed(seed, static_cast<std::uint64_t>(n));
    const SampleSet samples = simulate_replicas(plan, budget.replicas, budget.workers);
    for (std::size_t j = 0; j < reqs.size(); ++j) {
      ConvergenceRow row;
      row.n = n;
      row.limit = limits[j];
      row.prelimit = std::numeric_limits<double>::quiet_NaN();
      if (n <= budget.prelimit_max_n) {
        try {
          row.prelimit = prelimit_height_laplace(reqs[j], sb.params, n);
        } catch (const Error& e) {
          row.note = e.what();
        }
      }
      row.empirical = empirical_height_laplace(samples, reqs[j]);
      row.gap = std::abs(row.empirical.value - row.limit);
      tables[j].rows.push_back(row);
    }
  }
  return tables;
}

ConvergenceTable convergence_experiment(const ScalingLimitParams& s, const std::vector<long>& n_list,
                                        const LaplaceRequest& req, const ExperimentBudget& budget,
                                        std::uint64_t seed) {
  return convergence_experiment(s, n_list, std::vector<LaplaceRequest>{req}, budget, seed).front();
}

}  // namespace shocklab
