#include "shocklab/asep_exact.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "shocklab/errors.hpp"

namespace shocklab {

namespace {

constexpr int kDenseLimit = 10;

}  // namespace

std::vector<double> RateMatrix::row_sums() const {
  // accumulated in the same order as exit_rate, so the difference is exact
  std::vector<double> sums(exit_rate.size(), 0.0);
  for (const auto& tr : transitions) sums[tr.from] += tr.rate;
  for (size_t s = 0; s < sums.size(); ++s) sums[s] -= exit_rate[s];
  return sums;
}

RateMatrix build_generator(const RateParams& r, int n) {
  validate(r);
  if (n < 1) throw DomainError("build_generator: n must be >= 1");
  if (n > kMaxExactSites) throw SizeLimit("build_generator: n > 14 is beyond the exact solver");
  RateMatrix g;
  g.n = n;
  g.rates = r;
  const Config states = Config{1} << n;
  g.exit_rate.assign(states, 0.0);
  auto add = [&](Config from, Config to, double rate) {
    if (rate <= 0.0) return;
    g.transitions.push_back({from, to, rate});
    g.exit_rate[from] += rate;
  };
  for (Config s = 0; s < states; ++s) {
    for (int i = 1; i < n; ++i) {
      const int here = occupied(s, i), next = occupied(s, i + 1);
      const Config swapped = s ^ (Config{1} << (i - 1)) ^ (Config{1} << i);
      if (here == 1 && next == 0) add(s, swapped, 1.0);
      if (here == 0 && next == 1) add(s, swapped, r.q);
    }
    const Config first = Config{1};
    const Config last = Config{1} << (n - 1);
    if (occupied(s, 1))
      add(s, s ^ first, r.gamma);
    else
      add(s, s ^ first, r.alpha);
    if (occupied(s, n))
      add(s, s ^ last, r.beta);
    else
      add(s, s ^ last, r.delta);
  }
  return g;
}

StationaryTable stationary(const RateMatrix& gen) {
  const int states = static_cast<int>(gen.exit_rate.size());
  // Solve Q^T pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(states);
  rhs[states - 1] = 1.0;
  Eigen::VectorXd pi;
  if (gen.n <= kDenseLimit) {
    Eigen::MatrixXd qt = Eigen::MatrixXd::Zero(states, states);
    for (int s = 0; s < states; ++s) qt(s, s) = -gen.exit_rate[s];
    for (const auto& tr : gen.transitions) qt(tr.to, tr.from) += tr.rate;
    qt.row(states - 1).setOnes();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(qt);
    pi = lu.solve(rhs);
  } else {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(gen.transitions.size() + 2 * states);
    for (int s = 0; s < states - 1; ++s) trip.emplace_back(s, s, -gen.exit_rate[s]);
    for (const auto& tr : gen.transitions)
      if (static_cast<int>(tr.to) != states - 1) trip.emplace_back(tr.to, tr.from, tr.rate);
    for (int s = 0; s < states; ++s) trip.emplace_back(states - 1, s, 1.0);
    Eigen::SparseMatrix<double> qt(states, states);
    qt.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(qt);
    if (lu.info() != Eigen::Success) throw SolveFailure("stationary: sparse LU factorization failed");
    pi = lu.solve(rhs);
  }
  if (!pi.allFinite()) throw SolveFailure("stationary: non-finite solution");

  StationaryTable st;
  st.n = gen.n;
  st.probs.assign(pi.data(), pi.data() + states);
  std::vector<double> flow(states, 0.0);
  for (int s = 0; s < states; ++s) flow[s] -= gen.exit_rate[s] * st.probs[s];
  for (const auto& tr : gen.transitions) flow[tr.to] += tr.rate * st.probs[tr.from];
  for (double f : flow) st.residual = std::max(st.residual, std::abs(f));
  if (st.residual > 1e-11) {
    std::ostringstream msg;
    msg << "stationary: residual " << st.residual << " exceeds 1e-11";
    throw SolveFailure(msg.str());
  }
  return st;
}

StationaryTable stationary(const RateParams& r, int n) { return stationary(build_generator(r, n)); }

double joint_moment(const StationaryTable& st, const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != st.n) throw DomainError("joint_moment: need n weights");
  const size_t states = st.probs.size();
  double total = 0.0;
  for (size_t s = 0; s < states; ++s) {
    double w = st.probs[s];
    for (int i = 1; i <= st.n; ++i)
      if (occupied(static_cast<Config>(s), i)) w *= t[i - 1];
    total += w;
  }
  return total;
}

double height_laplace(const StationaryTable& st, const LaplaceRequest& req) {
  req.validate();
  const long n = st.n;
  const double rn = std::sqrt(static_cast<double>(n));
  const auto s = req.partial_sums();
  const auto ends = req.block_ends(n);
  // exp(-sum_k c_k h(x_k)/sqrt n) = exp(sum_k s_k m_k / sqrt n) prod_i t_i^{tau_i}
  // with t_i = exp(-2 s_k / sqrt n) on block k.
  std::vector<double> t(n, 1.0);
  double log_pref = 0.0;
  for (int k = 0; k < req.d(); ++k) {
    const double w = std::exp(-2.0 * s[k] / rn);
    for (long i = ends[k]; i < ends[k + 1]; ++i) t[i] = w;
    log_pref += s[k] * static_cast<double>(ends[k + 1] - ends[k]) / rn;
  }
  return std::exp(log_pref) * joint_moment(st, t);
}

std::vector<double> densities(const StationaryTable& st) {
  std::vector<double> rho(st.n, 0.0);
  for (size_t s = 0; s < st.probs.size(); ++s)
    for (int i = 1; i <= st.n; ++i)
      if (occupied(static_cast<Config>(s), i)) rho[i - 1] += st.probs[s];
  return rho;
}

SandwichResult sandwich_check(const BoundaryParams& bp1, const BoundaryParams& bp2,
                              const std::vector<double>& f) {
  if (!(bp1.A <= bp2.A && bp1.C >= bp2.C && bp1.B == bp2.B && bp1.D == bp2.D && bp1.q == bp2.q))
    throw PreconditionViolation("sandwich_check: need A' <= A'', C' >= C'', equal B, D, q");
  const int n = static_cast<int>(f.size());
  if (n < 1 || n > kDenseLimit) throw PreconditionViolation("sandwich_check: need 1 <= n <= 10");
  for (double v : f)
    if (!(v > 0.0 && v <= 1.0)) throw PreconditionViolation("sandwich_check: f must lie in (0,1]");
  SandwichResult res;
  res.first = joint_moment(stationary(boundary_to_rates(bp1), n), f);
  res.second = joint_moment(stationary(boundary_to_rates(bp2), n), f);
  res.ordered = res.first >= res.second - 1e-12 * std::abs(res.second);
  return res;
}

std::string config_string(Config s, int n) {
  std::string out(n, '0');
  for (int i = 1; i <= n; ++i)
    if (occupied(s, i)) out[i - 1] = '1';
  return out;
}

std::string stationary_to_csv(const StationaryTable& st) {
  std::ostringstream out;
  out << "configuration,probability\n";
  char buf[64];
  for (size_t s = 0; s < st.probs.size(); ++s) {
    std::snprintf(buf, sizeof buf, ",%.17e\n", st.probs[s]);
    out << config_string(static_cast<Config>(s), st.n) << buf;
  }
  return out.str();
}

}  // namespace shocklab
