#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lrsplit/problems.hpp"
#include "lrsplit/splitting.hpp"

namespace lrsplit {

// Experiment description parsed from a key-value config file. Grammar: one
// `key = value` pair per line, `#` starts a comment, lists are
// comma-separated, integer lists also accept `a..b` ranges. See the example
// configs shipped under configs/.
struct ExperimentConfig {
  std::string problem;             // reaction_diffusion | dle | dre | periodic_smooth | matrix_market
  Index m = 0;
  Index q = 9;                     // dle/dre source rank (odd)
  std::vector<Index> ranks;
  std::vector<double> taus;        // explicit step sizes, or resolved from tau_halvings
  std::vector<long> tau_halvings;  // k entries meaning tau = (T - t0) * 2^-k
  std::vector<std::string> schemes;
  double T = -1.0;                 // < 0: preset default
  double t0 = 0.0;
  ExpmMethod expm_method = ExpmMethod::Dense;
  SubstepSolver substep;
  std::uint64_t seed = 0;
  double sv_threshold = 1e-8;      // effective-rank cutoff relative to sigma_1
  int out_times = 20;              // singular-value sampling points
  std::string a_file;              // matrix_market problem inputs
  std::string q_file;

  std::string hash_hex() const;    // FNV-1a over the canonicalized fields
};

// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Builds the problem instance (with T/t0 resolved into the config's values).
ProblemSpec build_problem(ExperimentConfig& config);

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme scheme);

// One measured sweep point.
struct ConvergenceRecord {
  std::string scheme;
  Index rank = 0;        // 0 for full-rank / reference rows
  double tau = 0.0;
  long n_steps = 0;
  double error_frobenius = 0.0;
  double delta = 0.0;
  double eps_hat_max = 0.0;
  double wall_time_s = 0.0;
  std::string status = "ok";
};

// Runs the sweep (one reference solve, one row per scheme/rank/tau point,
// worker pool over points, rows emitted in deterministic point order) and
// writes <out_dir>/convergence.csv. Exit-code semantics: 0 all points ok,
// 2 all failed, 3 some failed.
int cmd_convergence(const ExperimentConfig& config, const std::string& out_dir, int threads);

// Writes <out_dir>/singvals_spectrum.csv (k, sigma at T) and
// <out_dir>/singvals_rank.csv (t, effective rank) from the reference
// trajectory.
int cmd_singular_values(const ExperimentConfig& config, const std::string& out_dir,
                        int threads);

// Writes <out_dir>/decompose.csv with one row (tau, E_sp, E_delta, E_lr,
// total) per tau, at the first configured rank.
int cmd_decompose(const ExperimentConfig& config, const std::string& out_dir, int threads);

// Emits a gnuplot script next to each recognized CSV. `csv_path` may name a
// single CSV; otherwise every known CSV in out_dir is processed. Throws
// ConfigError on unknown CSV schemas, naming the missing columns.
int cmd_emit_plots(const std::string& csv_path, const std::string& out_dir);

// Least-squares slope of log(y) against log(x); the standard order estimate
// over a step-size sweep.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Number of singular values above threshold * sigma_1 (0 for a zero matrix).
Index effective_rank(const Vector& sigma, double threshold);

}  // namespace lrsplit
