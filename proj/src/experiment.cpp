#include "lrsplit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "lrsplit/errors.hpp"
#include "lrsplit/matrix_market.hpp"
#include "lrsplit/reference.hpp"

namespace lrsplit {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

long parse_long(const std::string& field, const std::string& value) {
  try {
    size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(field + ": not an integer: '" + value + "'");
  }
}

double parse_double(const std::string& field, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(field + ": not a number: '" + value + "'");
  }
}

// Integer lists accept both "1,2,4" and "5..9" range items.
std::vector<long> parse_int_list(const std::string& field, const std::string& value) {
  std::vector<long> out;
  for (const std::string& item : split_list(value)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_long(field, item));
    } else {
      const long a = parse_long(field, trim(item.substr(0, dots)));
      const long b = parse_long(field, trim(item.substr(dots + 2)));
      if (b < a) throw ConfigError(field + ": empty range '" + item + "'");
      for (long v = a; v <= b; ++v) out.push_back(v);
    }
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& field, const std::string& value) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(parse_double(field, item));
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void run_pool(int threads, std::size_t n, const std::function<void(std::size_t)>& work) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int count = static_cast<int>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (int t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) work(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

struct SweepPoint {
  std::string scheme;
  Index rank;
  double tau;
};

}  // namespace

std::string ExperimentConfig::hash_hex() const {
  std::ostringstream ss;
  ss << "problem=" << problem << ";m=" << m << ";q=" << q << ";ranks=";
  for (Index r : ranks) ss << r << ",";
  ss << ";taus=";
  for (double t : taus) ss << format_double(t) << ",";
  ss << ";schemes=";
  for (const std::string& s : schemes) ss << s << ",";
  ss << ";T=" << format_double(T) << ";t0=" << format_double(t0)
     << ";expm=" << (expm_method == ExpmMethod::Dense ? "dense" : "krylov")
     << ";substep=" << (substep.kind == SubstepSolver::Kind::RK4 ? "rk4" : "explicit-euler")
     << ";substeps=" << substep.substeps << ";seed=" << seed
     << ";sv_threshold=" << format_double(sv_threshold) << ";out_times=" << out_times
     << ";a_file=" << a_file << ";q_file=" << q_file;

  // FNV-1a, 64 bit.
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : ss.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "lowrank-lie") return Scheme::LowRankLie;
  if (name == "lowrank-strang") return Scheme::LowRankStrang;
  if (name == "fullrank-lie") return Scheme::FullRankLie;
  if (name == "reference") return Scheme::Reference;
  throw ConfigError("schemes: unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::LowRankLie: return "lowrank-lie";
    case Scheme::LowRankStrang: return "lowrank-strang";
    case Scheme::FullRankLie: return "fullrank-lie";
    case Scheme::Reference: return "reference";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  bool have_taus = false;

  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(key + ": empty value");

    if (key == "problem") {
      config.problem = value;
    } else if (key == "m") {
      config.m = parse_long(key, value);
    } else if (key == "q") {
      config.q = parse_long(key, value);
    } else if (key == "ranks") {
      for (long r : parse_int_list(key, value)) config.ranks.push_back(r);
    } else if (key == "taus") {
      config.taus = parse_double_list(key, value);
      have_taus = true;
    } else if (key == "tau_halvings") {
      config.tau_halvings = parse_int_list(key, value);
    } else if (key == "schemes") {
      config.schemes = split_list(value);
    } else if (key == "T") {
      config.T = parse_double(key, value);
    } else if (key == "t0") {
      config.t0 = parse_double(key, value);
    } else if (key == "expm") {
      if (value == "dense")
        config.expm_method = ExpmMethod::Dense;
      else if (value == "krylov")
        config.expm_method = ExpmMethod::Krylov;
      else
        throw ConfigError("expm: must be 'dense' or 'krylov', got '" + value + "'");
    } else if (key == "substep") {
      if (value == "rk4")
        config.substep.kind = SubstepSolver::Kind::RK4;
      else if (value == "explicit-euler")
        config.substep.kind = SubstepSolver::Kind::ExplicitEuler;
      else
        throw ConfigError("substep: must be 'rk4' or 'explicit-euler', got '" + value + "'");
    } else if (key == "substeps") {
      config.substep.substeps = static_cast<int>(parse_long(key, value));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "sv_threshold") {
      config.sv_threshold = parse_double(key, value);
    } else if (key == "out_times") {
      config.out_times = static_cast<int>(parse_long(key, value));
    } else if (key == "a_file") {
      config.a_file = value;
    } else if (key == "q_file") {
      config.q_file = value;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  if (config.problem.empty()) throw ConfigError("problem: required");
  if (have_taus && !config.tau_halvings.empty())
    throw ConfigError("taus: give either 'taus' or 'tau_halvings', not both");
  if (have_taus && config.taus.empty()) throw ConfigError("taus: list must be non-empty");
  for (double tau : config.taus)
    if (tau <= 0.0) throw ConfigError("taus: entries must be positive");
  for (long k : config.tau_halvings)
    if (k < 0 || k > 60) throw ConfigError("tau_halvings: entries must be in [0, 60]");
  if (config.substep.substeps < 1) throw ConfigError("substeps: must be >= 1");
  if (config.sv_threshold <= 0.0) throw ConfigError("sv_threshold: must be positive");
  if (config.out_times < 1) throw ConfigError("out_times: must be >= 1");
  for (Index r : config.ranks)
    if (r < 1) throw ConfigError("ranks: entries must be >= 1");
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ProblemSpec build_problem(ExperimentConfig& config) {
  ProblemSpec problem;
  try {
    if (config.problem == "reaction_diffusion") {
      if (config.m < 4) throw ConfigError("m: reaction_diffusion needs m >= 4");
      problem = preset_reaction_diffusion(config.m);
    } else if (config.problem == "dle" || config.problem == "dre") {
      if (config.m < 2) throw ConfigError("m: required (>= 2)");
      if (config.q % 2 == 0 || config.q < 1) throw ConfigError("q: must be odd and >= 1");
      if (config.q > config.m) throw ConfigError("q: must not exceed m");
      problem = config.problem == "dle" ? preset_dle(config.m, config.q)
                                        : preset_dre(config.m, config.q);
    } else if (config.problem == "periodic_smooth") {
      if (config.m < 8) throw ConfigError("m: periodic_smooth needs m >= 8");
      problem = preset_periodic_smooth(config.m);
    } else if (config.problem == "matrix_market") {
      if (config.a_file.empty()) throw ConfigError("a_file: required for matrix_market");
      if (config.T < 0.0) throw ConfigError("T: required for matrix_market");
      MatrixMarketData a = load_matrix_market(config.a_file);
      if (a.rows() != a.cols())
        throw DimensionMismatch("a_file: operator must be square");
      if (config.m == 0) config.m = a.rows();
      if (config.m != a.rows())
        throw DimensionMismatch("a_file: matrix is " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + ", config declares m = " +
                                std::to_string(config.m));
      problem.label = "matrix_market";
      problem.A = std::make_shared<SparseOperator>(a.matrix);
      problem.X0 = DenseMatrix::Zero(config.m, config.m);
      if (!config.q_file.empty()) {
        MatrixMarketData qm = load_matrix_market(config.q_file);
        if (qm.rows() != config.m || qm.cols() != config.m)
          throw DimensionMismatch("q_file: expected " + std::to_string(config.m) + "x" +
                                  std::to_string(config.m));
        DenseMatrix Q = qm.dense();
        problem.G = std::make_shared<ConstantNonlinearity>(Q);
        problem.Q = std::move(Q);
      } else {
        problem.G = std::make_shared<ZeroNonlinearity>();
      }
    } else {
      throw ConfigError("problem: unknown preset '" + config.problem + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }

  if (config.T >= 0.0) problem.T = config.T;
  problem.t0 = config.t0;
  config.T = problem.T;
  if (config.T <= config.t0) throw ConfigError("T: must exceed t0");

  const double horizon = config.T - config.t0;
  for (long k : config.tau_halvings)
    config.taus.push_back(horizon * std::ldexp(1.0, -static_cast<int>(k)));
  config.tau_halvings.clear();
  if (config.taus.empty()) throw ConfigError("taus: list must be non-empty");
  for (double tau : config.taus) {
    const double ratio = horizon / tau;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || ratio < 0.5)
      throw ConfigError("taus: " + format_double(tau) + " does not divide T - t0 = " +
                        format_double(horizon) + " into whole steps");
  }

  if (config.schemes.empty()) throw ConfigError("schemes: list must be non-empty");
  bool lowrank_present = false;
  for (const std::string& s : config.schemes) {
    const Scheme scheme = parse_scheme(s);
    lowrank_present |= scheme == Scheme::LowRankLie || scheme == Scheme::LowRankStrang;
  }
  if (lowrank_present && config.ranks.empty())
    throw ConfigError("ranks: list must be non-empty for low-rank schemes");
  for (Index r : config.ranks)
    if (r > problem.dim()) throw ConfigError("ranks: rank exceeds problem dimension");

  return problem;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need at least two points");
  double sx = 0, sy = 0;
  const double n = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("fit_loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

Index effective_rank(const Vector& sigma, double threshold) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = threshold * sigma(0);
  Index count = 0;
  for (Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cut) ++count;
  return count;
}

namespace {

ConvergenceRecord run_sweep_point(const ProblemSpec& problem, const DenseMatrix& reference,
                                  const ExperimentConfig& config, const SweepPoint& point) {
  ConvergenceRecord rec;
  rec.scheme = point.scheme;
  rec.rank = point.rank;
  rec.tau = point.tau;
  rec.n_steps = std::lround((config.T - config.t0) / point.tau);

  const auto start = std::chrono::steady_clock::now();
  try {
    SchemeConfig sc;
    sc.scheme = parse_scheme(point.scheme);
    sc.rank = point.rank;
    sc.tau = point.tau;
    sc.expm_method = config.expm_method;
    sc.substep = config.substep;
    const IntegrationResult res = integrate(problem, sc, config.t0, config.T);
    rec.error_frobenius = (res.final_dense() - reference).norm();
    rec.delta = res.delta;
    rec.eps_hat_max = res.eps_hat_max();
  } catch (const RankDeficient&) {
    rec.status = "failed(RankDeficient)";
  } catch (const NonFiniteEvaluation&) {
    rec.status = "failed(NonFiniteEvaluation)";
  } catch (const Overflow&) {
    rec.status = "failed(Overflow)";
  } catch (const KrylovStagnation&) {
    rec.status = "failed(KrylovStagnation)";
  } catch (const MaxStepsExceeded&) {
    rec.status = "failed(MaxStepsExceeded)";
  } catch (const StepUnderflow&) {
    rec.status = "failed(StepUnderflow)";
  } catch (const StepCountOverflow&) {
    rec.status = "failed(StepCountOverflow)";
  } catch (const std::exception&) {
    rec.status = "failed(error)";
  }
  if (rec.status != "ok") {
    rec.error_frobenius = std::nan("");
    rec.delta = std::nan("");
    rec.eps_hat_max = std::nan("");
  }
  rec.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::ofstream open_csv(const std::string& out_dir, const std::string& name,
                       const std::string& kind, const std::string& hash) {
  std::filesystem::create_directories(out_dir);
  const std::string path = out_dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "# lrsplit " << kind << "\n";
  out << "# generated: " << timestamp_utc() << "\n";
  out << "# config hash: " << hash << "\n";
  return out;
}

int status_exit_code(std::size_t failed, std::size_t total) {
  if (failed == 0) return 0;
  return failed == total ? 2 : 3;
}

}  // namespace

int cmd_convergence(const ExperimentConfig& input, const std::string& out_dir, int threads) {
  ExperimentConfig config = input;
  const ProblemSpec problem = build_problem(config);
  for (const std::string& s : config.schemes)
    if (parse_scheme(s) == Scheme::Reference)
      throw ConfigError("schemes: 'reference' is the error baseline, not a sweep scheme");
  const std::string hash = config.hash_hex();

  const DenseMatrix reference = dopri5(problem, config.t0, config.T, ToleranceSpec{});

  std::vector<SweepPoint> points;
  for (const std::string& scheme : config.schemes) {
    const bool lowrank = parse_scheme(scheme) == Scheme::LowRankLie ||
                         parse_scheme(scheme) == Scheme::LowRankStrang;
    const std::vector<Index> ranks =
        lowrank ? config.ranks : std::vector<Index>{0};
    for (Index rank : ranks)
      for (double tau : config.taus) points.push_back({scheme, rank, tau});
  }

  std::vector<ConvergenceRecord> records(points.size());
  run_pool(threads, points.size(), [&](std::size_t i) {
    records[i] = run_sweep_point(problem, reference, config, points[i]);
  });

  std::ofstream out = open_csv(out_dir, "convergence.csv", "convergence sweep", hash);
  out << "scheme,rank,tau,n_steps,error_frobenius,delta,eps_hat_max,status,config_hash,"
         "wall_time_s\n";
  std::size_t failed = 0;
  for (const ConvergenceRecord& r : records) {
    if (r.status != "ok") ++failed;
    out << r.scheme << "," << r.rank << "," << format_double(r.tau) << "," << r.n_steps << ","
        << format_double(r.error_frobenius) << "," << format_double(r.delta) << ","
        << format_double(r.eps_hat_max) << "," << r.status << "," << hash << ","
        << format_double(r.wall_time_s) << "\n";
  }
  return status_exit_code(failed, records.size());
}

int cmd_singular_values(const ExperimentConfig& input, const std::string& out_dir,
                        int threads) {
  (void)threads;  // single reference trajectory
  ExperimentConfig config = input;
  const ProblemSpec problem = build_problem(config);
  const std::string hash = config.hash_hex();

  std::vector<double> times;
  for (int k = 0; k <= config.out_times; ++k)
    times.push_back(config.t0 + (config.T - config.t0) * k / config.out_times);

  std::vector<DenseMatrix> samples;
  try {
    samples = dopri5_samples(problem, times, ToleranceSpec{});
  } catch (const std::exception& e) {
    std::cerr << "singvals: reference solve failed: " << e.what() << "\n";
    return 2;
  }

  {
    std::ofstream out = open_csv(out_dir, "singvals_rank.csv", "effective rank over time", hash);
    out << "t,effective_rank,config_hash\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Vector sigma = svd_full(samples[i]).sigma;
      out << format_double(times[i]) << "," << effective_rank(sigma, config.sv_threshold)
          << "," << hash << "\n";
    }
  }
  {
    const Vector sigma = svd_full(samples.back()).sigma;
    std::ofstream out = open_csv(out_dir, "singvals_spectrum.csv",
                                 "singular values of the reference solution", hash);
    out << "k,sigma,config_hash\n";
    for (Index k = 0; k < sigma.size(); ++k)
      out << (k + 1) << "," << format_double(sigma(k)) << "," << hash << "\n";
  }
  return 0;
}

int cmd_decompose(const ExperimentConfig& input, const std::string& out_dir, int threads) {
  ExperimentConfig config = input;
  const ProblemSpec problem = build_problem(config);
  if (config.ranks.empty()) throw ConfigError("ranks: required for decompose");
  const Index rank = config.ranks.front();
  const std::string hash = config.hash_hex();

  struct Row {
    double tau;
    ErrorDecomposition e{};
    std::string status = "ok";
  };
  std::vector<Row> rows(config.taus.size());

  run_pool(threads, config.taus.size(), [&](std::size_t i) {
    rows[i].tau = config.taus[i];
    try {
      SchemeConfig sc;
      sc.scheme = Scheme::LowRankLie;
      sc.rank = rank;
      sc.tau = config.taus[i];
      sc.expm_method = config.expm_method;
      sc.substep = config.substep;
      rows[i].e = error_decomposition(problem, sc, config.t0, config.T);
    } catch (const std::exception&) {
      rows[i].status = "failed(error)";
      rows[i].e = {std::nan(""), std::nan(""), std::nan(""), std::nan("")};
    }
  });

  std::ofstream out = open_csv(out_dir, "decompose.csv", "error decomposition", hash);
  out << "tau,E_sp,E_delta,E_lr,total,status,config_hash\n";
  std::size_t failed = 0;
  for (const Row& r : rows) {
    if (r.status != "ok") ++failed;
    out << format_double(r.tau) << "," << format_double(r.e.e_sp) << ","
        << format_double(r.e.e_delta) << "," << format_double(r.e.e_lr) << ","
        << format_double(r.e.total) << "," << r.status << "," << hash << "\n";
  }
  return status_exit_code(failed, rows.size());
}

}  // namespace lrsplit
