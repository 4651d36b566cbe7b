// Command-line front end: filter design, greedy-quantization simulation,
// error sweeps, the multi-level rate table, efficiency curves, and the
// validation suite. All randomized paths draw from a seeded mt19937_64, so a
// fixed seed reproduces output files byte for byte.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdm/csv.hpp"
#include "sdm/integer_filters.hpp"
#include "sdm/modulator.hpp"
#include "sdm/parallel.hpp"
#include "sdm/rate_analysis.hpp"
#include "sdm/reconstruction.hpp"
#include "sdm/rng.hpp"
#include "sdm/validation.hpp"

namespace {

constexpr int kExitValidationFailure = 1;
constexpr int kExitBadParameters = 2;

struct OutputTarget {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);  // binary: byte-identical across runs
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    os = &file;
  }
};

double resolve_gamma(const std::optional<double>& gamma, const std::optional<double>& sigma) {
  if (gamma.has_value() == sigma.has_value())
    throw CLI::ValidationError("exactly one of --gamma or --sigma must be given");
  return gamma ? *gamma : sdm::gamma_from_sigma(*sigma);
}

sdm::SignalSpec random_signal(double omega, double mu, int tones, sdm::Rng& rng) {
  std::vector<sdm::SignalSpec::Tone> parts(tones);
  double total = 0.0;
  for (auto& t : parts) {
    t.freq = (rng.next() % 2 ? 1.0 : -1.0) * rng.uniform(0.05 * omega, 0.95 * omega);
    t.amp = rng.uniform(0.2, 1.0);
    t.phase = rng.uniform(0.0, 2.0 * std::acos(-1.0));
    total += t.amp;
  }
  for (auto& t : parts) t.amp *= mu / total;
  return sdm::SignalSpec::make(omega, std::move(parts), mu);
}

int cmd_design(int m, double gamma, int levels, const std::string& out_path) {
  if (m < 1) {
    std::cerr << "design: order must be >= 1\n";
    return kExitBadParameters;
  }
  if (gamma <= 1.0 || gamma > levels) {
    std::cerr << "design: need 1 < gamma <= L (the one-norm of a feasible filter is at"
                 " least 1 and at most the number of levels)\n";
    return kExitBadParameters;
  }
  auto design = sdm::design_filter(m, gamma);
  OutputTarget out(out_path);
  *out.os << sdm::design_to_json(design);
  return 0;
}

int cmd_simulate(int m, double gamma, int levels, double mu, double lambda, int samples,
                 int tones, std::uint64_t seed, const std::string& out_path) {
  if (m < 1 || gamma <= 1.0 || gamma > levels || lambda <= 0.0 || samples < 1) {
    std::cerr << "simulate: invalid parameters\n";
    return kExitBadParameters;
  }
  auto design = sdm::design_filter(m, gamma);
  if (mu < 0.0) mu = 0.9 * std::max(0.0, sdm::stability_margin(design, 0.0, levels));
  if (sdm::stability_margin(design, mu, levels) < 0.0)
    std::cerr << "simulate: warning: ||h||_1 + mu exceeds L, stability not guaranteed\n";

  const double omega = 1.0;
  double tau = 1.0 / (2.0 * omega * lambda);
  sdm::Rng rng(seed);
  auto spec = random_signal(omega, mu, tones, rng);
  std::vector<double> y(samples);
  for (int n = 0; n < samples; ++n) y[n] = sdm::eval_signal(spec, n * tau);
  auto trace = sdm::run_greedy(sdm::h_from_design(design), y, sdm::Alphabet(levels));

  std::vector<double> u;
  if (m <= 20) u = sdm::canonical_state(sdm::g_from_design(design), trace);

  OutputTarget out(out_path);
  sdm::CsvWriter csv(*out.os);
  if (u.empty())
    csv.header({"n", "y", "q", "v"});
  else
    csv.header({"n", "y", "q", "v", "u"});
  for (int n = 0; n < samples; ++n) {
    auto row = csv.row();
    row.col(static_cast<std::int64_t>(n)).col(y[n]).col(trace.q[n]).col(trace.v[n]);
    if (!u.empty()) row.col(u[n]);
  }
  return 0;
}

struct SweepRow {
  double lambda = 0.0;
  int m = 0;
  double sup_err = 0.0;
  double bound = 0.0;
  double budget = 0.0;
  std::string note;
};

int cmd_sweep(std::vector<int> ms, double gamma, double epsilon, double mu, double window,
              double lambda_min, double lambda_max, int lambda_steps, double tmax_cap,
              std::uint64_t seed, int jobs, const std::string& out_path) {
  if (ms.empty() || gamma <= 1.0 || epsilon <= 0.0 || lambda_min <= 0.0 ||
      lambda_max < lambda_min || lambda_steps < 1 || window <= 0.0) {
    std::cerr << "sweep: invalid parameters\n";
    return kExitBadParameters;
  }
  const double omega = 1.0;
  std::vector<double> lambdas(lambda_steps);
  for (int i = 0; i < lambda_steps; ++i)
    lambdas[i] = lambda_steps == 1
                     ? lambda_min
                     : lambda_min * std::pow(lambda_max / lambda_min,
                                             static_cast<double>(i) / (lambda_steps - 1));

  double t_max = std::min(sdm::recommended_t_max(omega, epsilon), tmax_cap);
  double tau_min = 1.0 / (2.0 * omega * lambda_max);
  sdm::Kernel kernel(omega, epsilon, tau_min / 64.0, t_max);
  double log_phi = std::log(kernel.l1_norm());

  sdm::Rng rng(seed);
  auto spec = random_signal(omega, mu, 2, rng);

  std::vector<SweepRow> rows(lambdas.size() * ms.size());
  std::vector<int> warnings(rows.size(), 0);
  sdm::parallel_for(
      static_cast<std::int64_t>(rows.size()),
      [&](std::int64_t idx) {
        double lambda = lambdas[idx / ms.size()];
        int m = ms[idx % ms.size()];
        SweepRow& row = rows[idx];
        row.lambda = lambda;
        row.m = m;
        try {
          auto design = sdm::design_filter(m, gamma);
          row.bound = std::exp2(
              sdm::log2_error_bound(m, lambda, design.log_g1, log_phi, epsilon));
          double tau = 1.0 / (2.0 * omega * lambda);
          double t_lo = t_max + 1.0, t_hi = t_lo + window;
          auto n_samples = static_cast<size_t>(std::ceil((t_hi + t_max + 1.0) / tau)) + 1;
          std::vector<double> y(n_samples);
          for (size_t n = 0; n < n_samples; ++n) y[n] = sdm::eval_signal(spec, n * tau);
          auto trace = sdm::run_greedy(sdm::h_from_design(design), y, sdm::Alphabet(2));
          auto res = sdm::sup_error(spec, trace.q, tau, kernel, t_lo, t_hi, 100);
          row.sup_err = res.total();
          row.budget = res.truncation_budget;
          if (row.budget > 0.01 * res.max_deviation) {
            row.note = "truncation budget above 1% of measurement";
            warnings[idx] = 1;
          }
          if (row.sup_err > row.bound) {
            row.note = "measured error above worst-case bound";
            warnings[idx] = 1;
          }
        } catch (const std::exception& e) {
          row.sup_err = std::nan("");
          row.note = e.what();
          warnings[idx] = 1;
        }
      },
      jobs);

  OutputTarget out(out_path);
  sdm::CsvWriter csv(*out.os);
  csv.header({"lambda", "m", "sup_error", "bound", "truncation_budget", "note"});
  int warn_count = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv.row().col(r.lambda).col(r.m).col(r.sup_err).col(r.bound).col(r.budget).col(r.note);
    warn_count += warnings[i];
  }
  if (warn_count > 0) std::cerr << "sweep: " << warn_count << " row(s) flagged\n";
  return 0;
}

int cmd_bound_curve(double gamma, double epsilon, int m_max, double lambda_min,
                    double lambda_max, int lambda_steps, const std::string& out_path) {
  sdm::DesignCache cache(gamma, m_max);
  OutputTarget out(out_path);
  sdm::CsvWriter csv(*out.os);
  csv.header({"lambda", "m_opt", "log2_bound"});
  for (int i = 0; i < lambda_steps; ++i) {
    double lambda = lambda_steps == 1
                        ? lambda_min
                        : lambda_min * std::pow(lambda_max / lambda_min,
                                                static_cast<double>(i) / (lambda_steps - 1));
    auto choice = sdm::optimize_order(lambda, cache, epsilon);
    if (choice.at_boundary)
      std::cerr << "bound curve: optimum clipped at m_max for lambda=" << lambda << "\n";
    csv.row().col(lambda).col(choice.m_opt).col(choice.log2_bound);
  }
  return 0;
}

int cmd_table(const std::vector<int>& levels, const std::string& out_path) {
  for (int L : levels)
    if (L < 2) {
      std::cerr << "table: levels must be >= 2\n";
      return kExitBadParameters;
    }
  auto rows = sdm::multilevel_table(levels);
  OutputTarget out(out_path);
  sdm::CsvWriter csv(*out.os);
  csv.header({"L", "bits", "sigma", "max_input", "r0", "efficiency"});
  for (const auto& r : rows)
    csv.row().col(r.L).col(r.bits_per_sample).col(r.sigma).col(r.max_input).col(r.r0).col(
        r.efficiency);
  return 0;
}

int cmd_efficiency(double sigma_min, double sigma_max, int sigma_steps, int m_est,
                   const std::vector<int>& positions, const std::string& out_path) {
  if (sigma_min <= 0.0 || sigma_max < sigma_min || sigma_steps < 1) {
    std::cerr << "efficiency: invalid sigma grid\n";
    return kExitBadParameters;
  }
  std::vector<double> grid(sigma_steps);
  for (int i = 0; i < sigma_steps; ++i)
    grid[i] = sigma_steps == 1
                  ? sigma_min
                  : sigma_min + (sigma_max - sigma_min) * i / (sigma_steps - 1);

  OutputTarget out(out_path);
  sdm::CsvWriter csv(*out.os);
  if (!positions.empty()) {
    auto rows = sdm::sigma_quantization_curve(grid, positions, m_est);
    csv.header({"sigma", "j", "x_limit", "n_j"});
    for (const auto& r : rows)
      csv.row().col(r.sigma).col(r.j).col(r.x_limit).col(r.n_position);
    return 0;
  }
  auto pts = sdm::efficiency_curve(grid, m_est);
  csv.header({"sigma", "limit_factor", "efficiency", "converged"});
  for (const auto& p : pts)
    csv.row().col(p.sigma).col(p.limit_factor).col(p.efficiency).col(
        std::string(p.converged ? "yes" : "no"));
  return 0;
}

int cmd_validate(int steps, std::uint64_t seed, const std::string& out_path) {
  auto results = sdm::validation::run_all(steps, seed);
  OutputTarget out(out_path);
  bool all = true;
  for (const auto& r : results) {
    *out.os << "group=" << r.group << " status=" << (r.pass ? "PASS" : "FAIL")
            << " detail=" << r.detail << "\n";
    all = all && r.pass;
  }
  *out.os << (all ? "result=PASS" : "result=FAIL") << "\n";
  return all ? 0 : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sigma-Delta modulation toolkit: minimally supported feedback filters,"
               " greedy one-bit and multi-level quantization, reconstruction error"
               " analysis"};
  app.require_subcommand(1);

  std::optional<double> opt_gamma, opt_sigma;
  int m = 2;
  int levels = 2;
  std::string out_path = "-";
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub, bool with_gamma) {
    sub->add_option("--out", out_path, "output file (default stdout)");
    if (with_gamma) {
      sub->add_option("--gamma", opt_gamma, "constraint level for ||h||_1 (in (1, L])");
      sub->add_option("--sigma", opt_sigma, "rate parameter; gamma = cosh(pi/sqrt(sigma))");
    }
  };

  auto* design = app.add_subcommand("design", "print a minimally supported filter design");
  design->add_option("--m", m, "filter order")->required();
  design->add_option("--levels", levels, "alphabet size L");
  add_common(design, true);

  auto* simulate = app.add_subcommand("simulate", "run greedy quantization on a random"
                                                  " bandlimited signal, emit the trace");
  int samples = 8192, tones = 2;
  double lambda = 64.0, mu = -1.0;
  simulate->add_option("--m", m, "filter order")->required();
  simulate->add_option("--levels", levels, "alphabet size L");
  simulate->add_option("--mu", mu, "input amplitude bound (default 0.9 of the margin)");
  simulate->add_option("--lambda", lambda, "oversampling ratio");
  simulate->add_option("--samples", samples, "trace length");
  simulate->add_option("--tones", tones, "number of sinusoids");
  simulate->add_option("--seed", seed, "PRNG seed");
  add_common(simulate, true);

  auto* sweep = app.add_subcommand("sweep", "sup-error vs oversampling ratio sweep");
  std::vector<int> sweep_ms{1, 2};
  double epsilon = 0.01, lambda_min = 32.0, lambda_max = 256.0, window = 8.0,
         tmax_cap = 60.0, sweep_mu = 0.3;
  int lambda_steps = 4, jobs = 0, m_max = 2000;
  bool bound_only = false;
  sweep->add_option("--m", sweep_ms, "filter orders (repeatable)");
  sweep->add_option("--epsilon", epsilon, "kernel transition parameter");
  sweep->add_option("--mu", sweep_mu, "input amplitude bound");
  sweep->add_option("--window", window, "measurement window length");
  sweep->add_option("--lambda-min", lambda_min, "smallest oversampling ratio");
  sweep->add_option("--lambda-max", lambda_max, "largest oversampling ratio");
  sweep->add_option("--lambda-steps", lambda_steps, "geometric grid size");
  sweep->add_option("--tmax-cap", tmax_cap, "cap on the kernel tail radius");
  sweep->add_option("--seed", seed, "PRNG seed");
  sweep->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  sweep->add_option("--m-max", m_max, "design cache size for --bound-only");
  sweep->add_flag("--bound-only", bound_only,
                  "emit the order-optimized bound curve instead of simulating");
  add_common(sweep, true);

  auto* table = app.add_subcommand("table", "multi-level alphabet comparison table");
  std::vector<int> table_levels{2, 3, 4, 5, 12};
  table->add_option("--levels", table_levels, "alphabet sizes");
  add_common(table, false);

  auto* efficiency = app.add_subcommand("efficiency", "coding efficiency over sigma");
  double sigma_min = 0.5, sigma_max = 8.0;
  int sigma_steps = 16, m_est = 2000;
  std::vector<int> positions;
  efficiency->add_option("--sigma-min", sigma_min, "grid start");
  efficiency->add_option("--sigma-max", sigma_max, "grid end");
  efficiency->add_option("--sigma-steps", sigma_steps, "grid size");
  efficiency->add_option("--m-est", m_est, "order at which limits are estimated");
  efficiency->add_option("--positions", positions,
                         "emit x_{j-1} vs n_j rows for these j instead of the curve");
  add_common(efficiency, false);

  auto* validate = app.add_subcommand("validate", "run the numeric invariant suites");
  int steps = 100000;
  validate->add_option("--steps", steps, "trace length for the stability group");
  validate->add_option("--seed", seed, "PRNG seed");
  add_common(validate, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadParameters;
  }

  try {
    if (app.got_subcommand(design))
      return cmd_design(m, resolve_gamma(opt_gamma, opt_sigma), levels, out_path);
    if (app.got_subcommand(simulate))
      return cmd_simulate(m, resolve_gamma(opt_gamma, opt_sigma), levels, mu, lambda,
                          samples, tones, seed, out_path);
    if (app.got_subcommand(sweep)) {
      double gamma = resolve_gamma(opt_gamma, opt_sigma);
      if (bound_only)
        return cmd_bound_curve(gamma, epsilon, m_max, lambda_min, lambda_max, lambda_steps,
                               out_path);
      return cmd_sweep(sweep_ms, gamma, epsilon, sweep_mu, window, lambda_min, lambda_max,
                       lambda_steps, tmax_cap, seed, jobs, out_path);
    }
    if (app.got_subcommand(table)) return cmd_table(table_levels, out_path);
    if (app.got_subcommand(efficiency))
      return cmd_efficiency(sigma_min, sigma_max, sigma_steps, m_est, positions, out_path);
    if (app.got_subcommand(validate)) return cmd_validate(steps, seed, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadParameters;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitBadParameters;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitBadParameters;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidationFailure;
  }
  return 0;
}
