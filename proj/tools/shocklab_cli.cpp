// Command-line front end. Every subcommand accepts --config FILE with flat
// key=value lines (keys are the long option names); flags on the command line
// win over config entries. With --out DIR the run writes its CSV, a manifest
// that re-runs it (pass it back with --config) and summary.json into DIR;
// without --out the CSV goes to stdout.
//
// Exit codes: 0 success, 1 usage or domain error, 2 tolerance failure.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shocklab/asep_exact.hpp"
#include "shocklab/asep_mc.hpp"
#include "shocklab/duality.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/limit_process.hpp"
#include "shocklab/parallel.hpp"
#include "shocklab/prelimit.hpp"
#include "shocklab/selftest.hpp"
#include "shocklab/specfun.hpp"

using namespace shocklab;
using json = nlohmann::json;

namespace {

constexpr int kUsage = 1;
constexpr int kTolerance = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// What a subcommand produced. failures non-empty means exit 2.
struct Outcome {
  std::string csv_name;
  std::string csv;
  json summary = json::object();
  std::vector<std::string> failures;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  int workers = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "flat key=value file; command-line flags take precedence");
  sub->add_option("--out", c.out, "output directory for CSV, manifest and summary.json");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--workers", c.workers, "worker threads (default: SHOCKLAB_WORKERS or all cores)");
}

void add_rates(CLI::App* sub, RateParams& r) {
  sub->add_option("--alpha", r.alpha, "entry rate at site 1");
  sub->add_option("--beta", r.beta, "exit rate at site n");
  sub->add_option("--gamma", r.gamma, "exit rate at site 1");
  sub->add_option("--delta", r.delta, "entry rate at site n");
  sub->add_option("--q", r.q, "left hop rate");
}

void add_request(CLI::App* sub, std::vector<double>& x, std::vector<double>& coef) {
  sub->add_option("--x", x, "observation points, increasing, last one 1")->delimiter(',');
  sub->add_option("--coef", coef, "Laplace coefficients, one per point")->delimiter(',');
}

LaplaceRequest request(const std::vector<double>& x, const std::vector<double>& coef) {
  LaplaceRequest req{x, coef};
  try {
    req.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("--x/--coef: ") + e.what());
  }
  return req;
}

std::string request_header(const LaplaceRequest& req) {
  std::vector<std::string> cols;
  for (int k = 1; k <= req.d(); ++k) cols.push_back("x" + std::to_string(k));
  for (int k = 1; k <= req.d(); ++k) cols.push_back("c" + std::to_string(k));
  return join(cols);
}

std::string request_cells(const LaplaceRequest& req) {
  std::vector<std::string> cells;
  for (double v : req.x) cells.push_back(num(v));
  for (double v : req.c) cells.push_back(num(v));
  return join(cells);
}

// -- exact --------------------------------------------------------------------

struct ExactCmd {
  RateParams r;
  int n = 2;
  std::vector<double> x{1.0}, coef;

  void add(CLI::App* sub) {
    add_rates(sub, r);
    sub->add_option("--n", n, "number of sites (1..14)");
    add_request(sub, x, coef);
  }
  Outcome run(const Common&) const {
    const StationaryTable st = stationary(r, n);
    Outcome o;
    o.csv_name = "exact.csv";
    o.csv = stationary_to_csv(st);
    o.summary["residual"] = st.residual;
    o.summary["densities"] = densities(st);
    if (!coef.empty()) o.summary["height_laplace"] = height_laplace(st, request(x, coef));
    return o;
  }
};

// -- mpa-check ----------------------------------------------------------------

struct MpaCmd {
  BoundaryParams bp{0.5, -0.2, 0.5, -0.2, 0.3};
  int n_min = 2, n_max = 8;
  std::vector<double> x{0.5, 1.0}, coef{0.8, 0.5};
  double tol = 1e-7;

  void add(CLI::App* sub) {
    sub->add_option("--A", bp.A);
    sub->add_option("--B", bp.B);
    sub->add_option("--C", bp.C);
    sub->add_option("--D", bp.D);
    sub->add_option("--q", bp.q);
    sub->add_option("--n-min", n_min);
    sub->add_option("--n-max", n_max);
    add_request(sub, x, coef);
    sub->add_option("--tol", tol, "allowed |integral - exact|");
  }
  Outcome run(const Common&) const {
    const LaplaceRequest req = request(x, coef);
    if (n_min < 1 || n_max < n_min || n_max > kMaxExactSites) throw UsageError("--n-min/--n-max out of range");
    Outcome o;
    o.csv_name = "mpa_check.csv";
    o.csv = "n," + request_header(req) + ",exact,integral,abs_diff\n";
    double worst = 0.0;
    for (int n = n_min; n <= n_max; ++n) {
      const double exact = height_laplace(stationary(boundary_to_rates(bp), n), req);
      const double viaint = prelimit_height_laplace(req, bp, n);
      const double diff = std::abs(exact - viaint);
      worst = std::max(worst, diff);
      o.csv += std::to_string(n) + "," + request_cells(req) + "," + num(exact) + "," + num(viaint) + "," +
               num(diff) + "\n";
      if (!(diff < tol)) o.failures.push_back("n=" + std::to_string(n) + " |diff|=" + num(diff));
    }
    o.summary["max_abs_diff"] = worst;
    return o;
  }
};

// -- zn -----------------------------------------------------------------------

struct ZnCmd {
  ScalingLimitParams s{0.5, -1.0, -0.2, -0.2, 0.3};
  double A = NAN, C = NAN;
  std::vector<long> n_list{100, 1000, 10000};

  void add(CLI::App* sub) {
    sub->add_option("--a", s.a_lim, "limit of sqrt(n)(1 - A_n)");
    sub->add_option("--c", s.c_lim, "limit of sqrt(n)(1 - C_n)");
    sub->add_option("--B", s.B);
    sub->add_option("--D", s.D);
    sub->add_option("--q", s.q);
    sub->add_option("--A", A, "fixed A instead of the scaling sequence (needs --C)");
    sub->add_option("--C", C, "fixed C instead of the scaling sequence (needs --A)");
    sub->add_option("--n", n_list, "system sizes")->delimiter(',');
  }
  Outcome run(const Common&) const {
    const bool fixed = !std::isnan(A) || !std::isnan(C);
    if (fixed && (std::isnan(A) || std::isnan(C))) throw UsageError("--A and --C go together");
    const bool limit_known = !fixed;
    const double target = limit_known ? calH(s.a_lim / std::sqrt(2.0), s.c_lim / std::sqrt(2.0)) : NAN;
    Outcome o;
    o.csv_name = "zn.csv";
    o.csv = "n,A_n,C_n,z_n,continuous,atoms,limit,abs_err\n";
    for (long n : n_list) {
      const BoundaryParams bp = fixed ? BoundaryParams{A, s.B, C, s.D, s.q} : scaling_sequence(s, n).params;
      const ZnParts p = z_n_parts(bp, n);
      o.csv += std::to_string(n) + "," + num(bp.A) + "," + num(bp.C) + "," + num(p.total()) + "," +
               num(p.continuous) + "," + num(p.atoms) + "," + num(target) + "," +
               num(std::abs(p.total() - target)) + "\n";
    }
    if (limit_known) o.summary["limit"] = target;
    return o;
  }
};

// -- limit-laplace ------------------------------------------------------------

struct LimitCmd {
  double a = 0.5, c = -1.0;
  std::vector<double> x{1.0}, coef{1.0}, scales{1.0};

  void add(CLI::App* sub) {
    sub->add_option("--a", a);
    sub->add_option("--c", c);
    add_request(sub, x, coef);
    sub->add_option("--scales", scales, "multiply the coefficients by each value in turn")->delimiter(',');
  }
  Outcome run(const Common&) const {
    const LaplaceRequest base = request(x, coef);
    const double r2 = std::sqrt(2.0);
    Outcome o;
    o.csv_name = "limit_laplace.csv";
    o.csv = "scale," + request_header(base) + ",psi,phi\n";
    for (double sc : scales) {
      LaplaceRequest req = base;
      std::vector<double> half;
      for (double& v : req.c) {
        v *= sc;
        half.push_back(v / r2);
      }
      const double psi = eta_laplace({a / r2, c / r2}, req.x, half);
      const double phi = limit_height_laplace({a, c}, req.x, req.c);
      o.csv += num(sc) + "," + request_cells(req) + "," + num(psi) + "," + num(phi) + "\n";
    }
    return o;
  }
};

// -- duality-check ------------------------------------------------------------

struct DualityCmd {
  int d = 1;
  double a = NAN, c = NAN;
  std::vector<double> x, coef;
  int count = 10;
  bool grid = false;
  std::string form = "cauchy";
  double tol = NAN;

  void add(CLI::App* sub) {
    sub->add_option("--d", d, "number of points (1..3)");
    sub->add_option("--a", a, "single instance (with --c, --x, --coef)");
    sub->add_option("--c", c);
    add_request(sub, x, coef);
    sub->add_option("--count", count, "random admissible instances when no single instance is given");
    sub->add_flag("--grid", grid, "use the 125-point d=1 grid");
    sub->add_option("--form", form, "left side: cauchy or killed")->check(CLI::IsMember({"killed", "cauchy"}));
    sub->add_option("--tol", tol, "relative gap tolerance (default 1e-6 for d=1, 1e-3 otherwise)");
  }
  Outcome run(const Common& cm) const {
    if (d < 1 || d > 3) throw UsageError("--d must be 1, 2 or 3");
    std::vector<DualityInstance> insts;
    if (!std::isnan(a) || !std::isnan(c)) {
      if (std::isnan(a) || std::isnan(c) || coef.empty()) throw UsageError("single instance needs --a, --c and --coef");
      DualityInstance inst{a, c, x.empty() ? std::vector<double>{1.0} : x, coef};
      if (inst.d() != d) throw UsageError("--coef length must equal --d");
      try {
        inst.validate();
      } catch (const ConstraintViolation& e) {
        throw UsageError(e.what());
      }
      insts.push_back(inst);
    } else if (grid) {
      if (d != 1) throw UsageError("--grid is the d=1 grid");
      insts = d1_grid();
    } else {
      insts = admissible_instances(d, count, cm.seed);
    }
    const double limit = std::isnan(tol) ? (d == 1 ? 1e-6 : 1e-3) : tol;
    const PhiForm pf = form == "cauchy" ? PhiForm::Cauchy : PhiForm::Killed;
    Outcome o;
    o.csv_name = "duality.csv";
    o.csv = residual_csv_header(d) + "\n";
    double worst = 0.0;
    for (const auto& inst : insts) {
      const auto res = duality_residual(inst, pf);
      o.csv += residual_csv_row(inst, res, form) + "\n";
      worst = std::max(worst, res.rel_gap);
      if (!(res.rel_gap < limit)) {
        std::ostringstream line;
        line << "a=" << inst.a_lim << " c=" << inst.c_lim << " rel_gap=" << res.rel_gap;
        o.failures.push_back(line.str());
      }
    }
    o.summary["instances"] = insts.size();
    o.summary["max_rel_gap"] = worst;
    o.summary["tolerance"] = limit;
    return o;
  }
};

// -- eta-sample ---------------------------------------------------------------

struct EtaCmd {
  double a = 0.5, c = -1.0;
  int m = 256;
  long N = 10000;
  long max_paths = 100;
  bool two_line = false;

  void add(CLI::App* sub) {
    sub->add_option("--a", a);
    sub->add_option("--c", c);
    sub->add_option("--m", m, "grid size, a power of two >= 256");
    sub->add_option("--N", N, "number of paths (>= 1000)");
    sub->add_option("--max-paths", max_paths, "paths written to the CSV");
    sub->add_flag("--two-line", two_line, "also compare against the two-line representation");
  }
  Outcome run(const Common& cm) const {
    const LimitLawParams lp{a, c};
    const auto e = eta_sample(lp, m, N, cm.seed, cm.workers);
    Outcome o;
    o.csv_name = "eta_paths.csv";
    o.csv = ensemble_to_csv(e, static_cast<std::size_t>(std::max(0L, max_paths)));
    o.summary["ess"] = e.ess;
    o.summary["degenerate"] = e.degenerate;
    const auto z = ensemble_normalizer(e);
    o.summary["normalizer"] = {{"value", z.value}, {"stderr", z.stderr_}};
    o.summary["normalizer_exact"] = calH(a, c);
    if (e.degenerate) std::cerr << "warning: effective sample size below 1% of N\n";
    if (two_line) {
      const auto rep = two_line_check(lp, m, N, cm.seed, cm.workers);
      std::string csv = "t,power,line,direct,direct_se,reference,reference_se,z\n";
      for (const auto& row : rep.rows) {
        csv += num(row.t) + "," + std::to_string(row.power) + "," + row.line + "," + num(row.direct.value) + "," +
               num(row.direct.stderr_) + "," + num(row.reference.value) + "," + num(row.reference.stderr_) + "," +
               num(row.z_score) + "\n";
        if (!(row.z_score < 3.0))
          o.failures.push_back(row.line + " t=" + num(row.t) + " power " + std::to_string(row.power) +
                               " z=" + num(row.z_score));
      }
      o.extra_files.emplace_back("two_line.csv", csv);
    }
    return o;
  }
};

// -- simulate -----------------------------------------------------------------

struct SimulateCmd {
  RateParams r{1.0, 1.0, 0.0, 0.0, 0.0};
  int n = 100;
  long burn_in = 0, samples = 1000, thin = 0;
  int replicas = 16;
  std::vector<double> x{1.0}, coef;
  bool dump = false;

  void add(CLI::App* sub) {
    add_rates(sub, r);
    sub->add_option("--n", n);
    sub->add_option("--burn-in", burn_in, "burn-in events (default 20 n^2)");
    sub->add_option("--samples", samples, "samples per replica");
    sub->add_option("--thin", thin, "events between samples (default 5 n)");
    sub->add_option("--replicas", replicas);
    add_request(sub, x, coef);
    sub->add_flag("--dump", dump, "also write every sampled configuration");
  }
  Outcome run(const Common& cm) const {
    SimulationPlan plan{r, n, burn_in, samples, thin, cm.seed};
    const SampleSet s = simulate_replicas(plan, replicas, cm.workers);
    Outcome o;
    o.csv_name = "densities.csv";
    o.csv = "site,density,stderr\n";
    const auto dens = empirical_densities(s);
    for (int i = 0; i < n; ++i)
      o.csv += std::to_string(i + 1) + "," + num(dens[i].value) + "," + num(dens[i].stderr_) + "\n";
    o.summary["samples"] = s.size();
    o.summary["events"] = s.events;
    o.summary["left_hops"] = s.left_hops;
    o.summary["sample_interval"] = s.sample_dt;
    if (!coef.empty()) {
      const auto e = empirical_height_laplace(s, request(x, coef));
      o.summary["height_laplace"] = {{"value", e.value}, {"stderr", e.stderr_}};
    }
    if (dump) {
      std::string raw = "replica,configuration\n";
      for (std::size_t i = 0; i < s.size(); ++i) {
        raw += std::to_string(s.replica[i]) + ",";
        for (auto b : s.configs[i]) raw += b ? '1' : '0';
        raw += '\n';
      }
      o.extra_files.emplace_back("configurations.csv", raw);
    }
    return o;
  }
};

// -- convergence --------------------------------------------------------------

struct ConvergenceCmd {
  ScalingLimitParams s{0.5, -1.0, 0.0, 0.0, 0.0};
  std::vector<long> n_list{50, 200, 800};
  std::vector<double> x{1.0}, coef{1.0};
  ExperimentBudget budget;

  void add(CLI::App* sub) {
    sub->add_option("--a", s.a_lim);
    sub->add_option("--c", s.c_lim);
    sub->add_option("--B", s.B);
    sub->add_option("--D", s.D);
    sub->add_option("--q", s.q);
    sub->add_option("--n", n_list, "system sizes")->delimiter(',');
    add_request(sub, x, coef);
    sub->add_option("--samples", budget.samples_per_replica, "samples per replica");
    sub->add_option("--replicas", budget.replicas);
    sub->add_option("--burn-in-factor", budget.burn_in_factor, "burn-in events per n^2");
    sub->add_option("--thin-factor", budget.thin_factor, "events between samples per n");
    sub->add_option("--prelimit-max-n", budget.prelimit_max_n, "skip the quadrature value above this n");
  }
  Outcome run(const Common& cm) {
    budget.workers = cm.workers;
    const LaplaceRequest req = request(x, coef);
    const auto table = convergence_experiment(s, n_list, req, budget, cm.seed);
    Outcome o;
    o.csv_name = "convergence.csv";
    o.csv = table.to_csv(req);
    json rows = json::array();
    for (const auto& row : table.rows) {
      rows.push_back({{"n", row.n},
                      {"empirical", row.empirical.value},
                      {"stderr", row.empirical.stderr_},
                      {"prelimit", std::isnan(row.prelimit) ? json(nullptr) : json(row.prelimit)},
                      {"limit", row.limit},
                      {"note", row.note}});
    }
    o.summary["rows"] = rows;
    o.summary["gaps_decreasing"] = table.gaps_decreasing();
    if (!table.rows.empty()) {
      const auto& last = table.rows.back();
      if (!(last.gap < 3.0 * last.empirical.stderr_))
        o.failures.push_back("n=" + std::to_string(last.n) + ": gap " + num(last.gap) + " exceeds 3 SE " +
                             num(3.0 * last.empirical.stderr_));
    }
    if (!table.gaps_decreasing()) o.failures.push_back("gaps |empirical - limit| are not decreasing in n");
    return o;
  }
};

// -- selftest -----------------------------------------------------------------

struct SelftestCmd {
  SelftestOptions opt;
  std::vector<int> only;

  void add(CLI::App* sub) {
    sub->add_option("--only", only, "criterion ids to run")->delimiter(',');
    sub->add_option("--mc-samples", opt.mc_samples_per_replica, "simulation samples per replica");
    sub->add_option("--mc-replicas", opt.mc_replicas);
    sub->add_option("--mc-burn-in-factor", opt.mc_burn_in_factor);
    sub->add_option("--mc-thin-factor", opt.mc_thin_factor);
  }
  Outcome run(const Common& cm) {
    opt.seed = cm.seed;
    opt.workers = cm.workers;
    opt.only = only;
    Outcome o;
    o.csv_name = "selftest.csv";
    o.csv = "criterion,passed,seconds,summary\n";
    json rows = json::array();
    run_selftest(opt, [&](const CriterionResult& r) {
      std::fprintf(stderr, "criterion %d %s (%.1fs) %s: %s\n", r.id, r.passed ? "PASS" : "FAIL", r.seconds,
                   r.title.c_str(), r.summary.c_str());
      for (const auto& line : r.detail) std::fprintf(stderr, "    %s\n", line.c_str());
      o.csv += std::to_string(r.id) + "," + (r.passed ? "1" : "0") + "," + num(r.seconds) + ",\"" + r.summary + "\"\n";
      rows.push_back({{"id", r.id}, {"passed", r.passed}, {"summary", r.summary}, {"detail", r.detail}});
      if (!r.passed) o.failures.push_back("criterion " + std::to_string(r.id) + ": " + r.summary);
    });
    o.summary["criteria"] = rows;
    return o;
  }
};

// -- config handling ----------------------------------------------------------

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" + line + "'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

// Appends config entries as --key=value unless the key was given explicitly.
std::vector<std::string> merge_config(CLI::App* sub, const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const std::string key = a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2);
    given.insert(key);
    if (key == "config") path = a.find('=') != std::string::npos ? a.substr(a.find('=') + 1)
                                : (i + 1 < args.size() ? args[i + 1] : "");
  }
  std::vector<std::string> merged = args;
  if (path.empty()) return merged;
  for (const auto& [key, value] : read_config(path)) {
    if (key == "config" || key == "command") continue;
    if (sub->get_option_no_throw("--" + key) == nullptr)
      throw UsageError(path + ": unknown key '" + key + "' for " + sub->get_name());
    if (given.count(key)) continue;
    merged.push_back("--" + key + "=" + value);
  }
  return merged;
}

std::string manifest(CLI::App* sub) {
  std::string out = "# re-run with: shocklab " + sub->get_name() + " --config <this file>\ncommand=" +
                    sub->get_name() + "\n";
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "h") continue;
    std::string value;
    if (opt->count() > 0)
      value = join(opt->results());
    else
      value = opt->get_default_str();
    if (value.size() >= 2 && (value.front() == '[' || value.front() == '{')) value = value.substr(1, value.size() - 2);
    if (value.empty()) continue;  // unset list options stay unset
    out += name + "=" + value + "\n";
  }
  return out;
}

json config_json(CLI::App* sub) {
  json j = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "h") continue;
    j[name] = opt->count() > 0 ? join(opt->results()) : opt->get_default_str();
  }
  return j;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open ASEP stationary measures near the triple point: exact solver, integral forms, limit "
               "process, duality checks and simulation."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  ExactCmd exact;
  MpaCmd mpa;
  ZnCmd zn;
  LimitCmd limit;
  DualityCmd duality;
  EtaCmd eta;
  SimulateCmd sim;
  ConvergenceCmd conv;
  SelftestCmd self;

  std::map<std::string, std::function<Outcome()>> runners;
  auto reg = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    cmd.add(sub);
    runners[name] = [&cmd, &common]() { return cmd.run(common); };
  };
  reg("exact", "stationary law by linear solve, with densities", exact);
  reg("mpa-check", "exact law against the Askey-Wilson integral form", mpa);
  reg("zn", "normalizing integral Z_n along the scaling sequence", zn);
  reg("limit-laplace", "Laplace transforms of the limit process", limit);
  reg("duality-check", "residuals of the duality identity", duality);
  reg("eta-sample", "weighted Brownian path ensemble for the limit process", eta);
  reg("simulate", "continuous-time simulation of open ASEP", sim);
  reg("convergence", "simulation against the limit Laplace transform over n", conv);
  reg("selftest", "run the acceptance criteria", self);

  std::vector<std::string> args(argv, argv + argc);
  CLI::App* sub = nullptr;
  try {
    if (argc >= 2) {
      for (CLI::App* s : app.get_subcommands({})) {
        if (s->get_name() == args[1]) sub = s;
      }
    }
    if (sub != nullptr) args = merge_config(sub, args);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  sub = app.get_subcommands().front();

  Outcome out;
  try {
    out = runners.at(sub->get_name())();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TimeNotAdmissible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  json summary = {{"command", sub->get_name()},
                  {"config", config_json(sub)},
                  {"results", out.summary},
                  {"failures", out.failures},
                  {"status", out.failures.empty() ? "ok" : "tolerance failure"}};
  try {
    if (common.out.empty()) {
      std::cout << out.csv;
      for (const auto& [name, body] : out.extra_files) std::cout << "\n# " << name << "\n" << body;
      std::cerr << out.summary.dump() << "\n";
    } else {
      const std::filesystem::path dir(common.out);
      std::filesystem::create_directories(dir);
      write_file(dir / out.csv_name, out.csv);
      for (const auto& [name, body] : out.extra_files) write_file(dir / name, body);
      write_file(dir / "manifest.conf", manifest(sub));
      write_file(dir / "summary.json", summary.dump(2) + "\n");
      std::cerr << "wrote " << (dir / out.csv_name).string() << ", manifest.conf, summary.json\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  for (const auto& f : out.failures) std::cerr << "tolerance failure: " << f << "\n";
  return out.failures.empty() ? 0 : kTolerance;
}
