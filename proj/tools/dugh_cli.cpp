// Command-line front end: data simulation, solver runs, and benchmark sweeps
// with seeded reproducibility and CSV/JSON persistence.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "dugh/io.hpp"
#include "dugh/metrics.hpp"
#include "dugh/model.hpp"
#include "dugh/simgen.hpp"
#include "dugh/solver_baseline.hpp"
#include "dugh/solver_full.hpp"
#include "dugh/solver_thin.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dugh;

namespace {

/// Everything a command needs; flags and config-file keys mirror these
/// fields one-to-one.
struct RunConfig {
  // Simulation dimensions and knobs.
  simgen::SimConfig sim;
  std::string mode = "ar";              // simulate: ar | kron
  std::string kind = "toeplitz_ar1";    // kron temporal kind
  // Solver settings.
  std::string solver = "thin";
  std::vector<std::string> solvers = {"thin", "champagne"};
  double epsilon = 1e-8;
  int k_max = 1000;
  bool homoscedastic = false;
  bool parallel = false;
  // Sweep grids.
  std::vector<double> alphas = {0.8};
  std::vector<Index> t_list = {100};
  std::vector<int> p_list = {1};
  std::vector<Index> g_list = {10, 30, 50};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  // Paths.
  std::string data_dir;
  std::string out_dir;
};

std::string default_out_dir() {
  const char* env = std::getenv("DUGH_OUTPUT_DIR");
  return env && *env ? env : ".";
}

std::string trial_name(Index g) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "trial_%03lld.txt",
                static_cast<long long>(g));
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

kernels::ExecPolicy policy_of(const RunConfig& run) {
  return run.parallel ? kernels::ExecPolicy::Parallel
                      : kernels::ExecPolicy::Serial;
}

FitConfig fit_config_of(const RunConfig& run) {
  FitConfig config;
  config.epsilon = run.epsilon;
  config.k_max = run.k_max;
  config.seed = run.sim.seed;
  config.homoscedastic = run.homoscedastic;
  config.policy = policy_of(run);
  return config;
}

FitResult run_solver(const std::string& solver, const LeadField& lead,
                     const TrialSet& trials, const FitConfig& config) {
  if (solver == "full") return fit_full(lead, trials, config);
  if (solver == "thin") return fit_thin(lead, trials, config);
  if (solver == "champagne") return fit_champagne(lead, trials, config);
  throw ValidationError("unknown solver: " + solver);
}

// ---------------------------------------------------------------------------
// simulate

struct Dataset {
  LeadField lead;
  TrialSet trials;
  Matrix b_true;
  Matrix sources;             // ar mode: shared N x T ground truth
  Vector gamma;               // kron mode: ground-truth source variances
  std::vector<Index> active;  // ar mode: active row indices
  std::string mode;
};

/// AR-mode dataset: one shared stable AR process drives every active row (so
/// the ground-truth temporal covariance is well defined), the noiseless
/// signal L X is shared across trials, and each trial adds a fresh white
/// noise draw calibrated to the requested mixing parameter.
Dataset make_ar_dataset(const simgen::SimConfig& sim) {
  sim.validate();
  Rng rng(sim.seed);
  Dataset data;
  data.mode = "ar";
  data.lead = simgen::gen_lead_field_synthetic(sim.m_sensors, sim.n_sources,
                                               rng);
  const simgen::ARProcess process =
      simgen::random_stable_ar(sim.ar_order, rng);
  data.active = simgen::draw_active_rows(sim.n_sources, sim.n_active, rng);
  const std::vector<simgen::ARProcess> processes(data.active.size(), process);
  data.sources = simgen::gen_ar_sources_with(sim, processes, data.active, rng);

  const Vector autocov = simgen::ar_autocovariance(process, sim.t_samples);
  data.b_true.resize(sim.t_samples, sim.t_samples);
  for (Index i = 0; i < sim.t_samples; ++i) {
    for (Index j = 0; j < sim.t_samples; ++j) {
      data.b_true(i, j) = autocov[std::abs(i - j)];
    }
  }

  const Matrix signal = data.lead.entries * data.sources;
  std::vector<Matrix> blocks;
  blocks.reserve(sim.g_trials);
  for (Index g = 0; g < sim.g_trials; ++g) {
    const Matrix noise = rng.normal_matrix(sim.m_sensors, sim.t_samples);
    blocks.push_back(simgen::mix_noise(signal, noise, sim.alpha));
  }
  data.trials = TrialSet::from_blocks(std::move(blocks));
  return data;
}

/// Kronecker-mode dataset: gamma is an indicator over the active rows and
/// per-trial sources/noise both carry the sampled temporal covariance.
Dataset make_kron_dataset(const simgen::SimConfig& sim,
                          const std::string& kind) {
  sim.validate();
  Rng rng(sim.seed);
  Dataset data;
  data.mode = "kron";
  data.lead = simgen::gen_lead_field_synthetic(sim.m_sensors, sim.n_sources,
                                               rng);
  const auto temporal_kind = kind == "full_random"
                                 ? simgen::TemporalKind::FullRandom
                                 : simgen::TemporalKind::ToeplitzAr1;
  data.b_true =
      simgen::gen_temporal_cov(temporal_kind, sim.t_samples, sim.beta, rng);
  data.active = simgen::draw_active_rows(sim.n_sources, sim.n_active, rng);
  data.gamma = Vector::Zero(sim.n_sources);
  for (const Index row : data.active) data.gamma[row] = 1.0;
  data.trials = simgen::gen_trialset_kron(data.gamma, data.b_true, data.lead,
                                          sim.g_trials, sim.alpha, rng);
  return data;
}

Dataset make_dataset(const RunConfig& run) {
  return run.mode == "kron" ? make_kron_dataset(run.sim, run.kind)
                            : make_ar_dataset(run.sim);
}

int cmd_simulate(const RunConfig& run) {
  const Dataset data = make_dataset(run);
  const fs::path out(run.out_dir);
  fs::create_directories(out);

  io::save_matrix((out / "lead_field.txt").string(), data.lead.entries);
  io::save_matrix((out / "b_true.txt").string(), data.b_true);
  json trial_files = json::array();
  for (Index g = 0; g < data.trials.g_trials; ++g) {
    const std::string name = trial_name(g);
    io::save_matrix((out / name).string(), data.trials.blocks[g]);
    trial_files.push_back(name);
  }
  std::string truth_file;
  if (data.mode == "ar") {
    truth_file = "sources.txt";
    io::save_matrix((out / truth_file).string(), data.sources);
  } else {
    truth_file = "gamma.txt";
    io::save_matrix((out / truth_file).string(), Matrix(data.gamma));
  }

  json manifest;
  manifest["command"] = "simulate";
  manifest["mode"] = data.mode;
  manifest["seed"] = run.sim.seed;
  manifest["snr_db"] = simgen::snr_from_alpha(run.sim.alpha);
  manifest["config"] = {
      {"n_sources", run.sim.n_sources},   {"n_active", run.sim.n_active},
      {"m_sensors", run.sim.m_sensors},   {"t_samples", run.sim.t_samples},
      {"ar_order", run.sim.ar_order},     {"alpha", run.sim.alpha},
      {"g_trials", run.sim.g_trials},     {"beta", run.sim.beta},
      {"kind", run.kind},
  };
  manifest["active_rows"] = data.active;
  manifest["files"] = {
      {"lead_field", "lead_field.txt"},
      {"b_true", "b_true.txt"},
      {"ground_truth", truth_file},
      {"trials", trial_files},
  };
  write_json(out / "manifest.json", manifest);
  std::cout << "wrote " << (out / "manifest.json").string() << " plus "
            << 3 + data.trials.g_trials << " matrix files\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

int cmd_fit(const RunConfig& run) {
  const fs::path in(run.data_dir);
  const json manifest = read_json(in / "manifest.json");
  const LeadField lead = simgen::load_lead_field(
      (in / manifest["files"]["lead_field"].get<std::string>()).string());
  std::vector<Matrix> blocks;
  for (const auto& name : manifest["files"]["trials"]) {
    blocks.push_back(
        io::load_matrix((in / name.get<std::string>()).string()));
  }
  const TrialSet trials = TrialSet::from_blocks(std::move(blocks));

  const auto start = std::chrono::steady_clock::now();
  const FitResult result =
      run_solver(run.solver, lead, trials, fit_config_of(run));
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const fs::path out(run.out_dir);
  fs::create_directories(out);
  for (std::size_t g = 0; g < result.posterior_means.size(); ++g) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "posterior_mean_%03zu.txt", g);
    io::save_matrix((out / buf).string(), result.posterior_means[g]);
  }
  io::save_matrix((out / "h_est.txt").string(), Matrix(result.spatial.h));
  io::save_matrix((out / "b_est.txt").string(), dense_b(result.temporal));
  {
    std::ofstream trace(out / "nll_trace.csv");
    if (!trace) throw Error("cannot open nll_trace.csv for writing");
    trace << "iteration,nll\n";
    for (std::size_t k = 0; k < result.nll_trace.size(); ++k) {
      trace << k << ',' << io::format_double(result.nll_trace[k]) << '\n';
    }
  }
  json meta;
  meta["command"] = "fit";
  meta["solver"] = run.solver;
  meta["converged"] = result.converged;
  meta["iterations"] = result.iterations;
  meta["runtime_seconds"] = runtime;
  meta["spectrum_clips"] = result.spectrum_clips;
  meta["epsilon"] = run.epsilon;
  meta["k_max"] = run.k_max;
  meta["seed"] = run.sim.seed;
  meta["homoscedastic"] = run.homoscedastic;
  meta["final_nll"] = result.nll_trace.back();
  write_json(out / "fit_meta.json", meta);
  std::cout << "solver " << run.solver << ": "
            << (result.converged ? "converged" : "iteration cap") << " after "
            << result.iterations << " iterations\n";
  return 0;
}

// ---------------------------------------------------------------------------
// benchmark / cov-recovery

struct BenchRow {
  std::string solver;
  double snr_db = 0.0;
  Index t_samples = 0;
  int ar_order = 0;
  Index g_trials = 0;
  std::uint64_t seed = 0;
  double emd = 0.0;
  double tce = 0.0;
  double nmse = 0.0;
  double similarity_error = 0.0;
  double runtime_seconds = 0.0;
  Index iterations = 0;
};

/// NMSE after the scale of the estimate is optimized (the prior splits its
/// overall scale freely between spatial and temporal factors, so raw NMSE of
/// B-hat would measure that arbitrary split).
double scaled_nmse(const Matrix& b_true, const Matrix& b_est) {
  const double denom = b_est.squaredNorm();
  if (denom <= 0.0) return 1.0;
  const double scale =
      (b_est.array() * b_true.array()).sum() / denom;
  return metrics::nmse(b_true, scale * b_est);
}

Matrix hcat(const std::vector<Matrix>& blocks) {
  const Index rows = blocks.front().rows();
  Index cols = 0;
  for (const Matrix& b : blocks) cols += b.cols();
  Matrix out(rows, cols);
  Index at = 0;
  for (const Matrix& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

BenchRow evaluate(const std::string& solver, const Dataset& data,
                  const FitConfig& config, const RunConfig& run,
                  std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const FitResult result = run_solver(solver, data.lead, data.trials, config);
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const Index n = data.lead.n_sources;
  Matrix positions(n, 1);
  for (Index i = 0; i < n; ++i) positions(i, 0) = static_cast<double>(i);

  const Matrix est_stacked = hcat(result.posterior_means);
  const auto est_map =
      metrics::SourcePowerMap::from_sources(positions, est_stacked);

  BenchRow row;
  row.solver = solver;
  row.snr_db = simgen::snr_from_alpha(run.sim.alpha);
  row.t_samples = data.trials.t_samples;
  row.ar_order = data.mode == "ar" ? run.sim.ar_order : 0;
  row.g_trials = data.trials.g_trials;
  row.seed = seed;
  if (data.mode == "ar") {
    const auto true_map =
        metrics::SourcePowerMap::from_sources(positions, data.sources);
    row.emd = metrics::emd(true_map, est_map);
    Matrix true_active(static_cast<Index>(data.active.size()),
                       data.sources.cols());
    for (std::size_t i = 0; i < data.active.size(); ++i) {
      true_active.row(static_cast<Index>(i)) = data.sources.row(data.active[i]);
    }
    std::vector<Matrix> tiled(data.trials.blocks.size(), true_active);
    row.tce = metrics::tce(hcat(tiled), est_stacked);
  } else {
    const auto true_map = metrics::SourcePowerMap::make(
        positions, data.gamma.cwiseSqrt());
    row.emd = metrics::emd(true_map, est_map);
    row.tce = std::numeric_limits<double>::quiet_NaN();
  }
  const Matrix b_est = dense_b(result.temporal);
  row.nmse = scaled_nmse(data.b_true, b_est);
  row.similarity_error = metrics::similarity_error(data.b_true, b_est);
  row.runtime_seconds = runtime;
  row.iterations = result.iterations;
  return row;
}

void write_results_csv(const fs::path& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "solver,snr_db,t_samples,ar_order,g_trials,seed,emd,tce,nmse,"
         "similarity_error,runtime_seconds,iterations\n";
  for (const BenchRow& r : rows) {
    out << r.solver << ',' << io::format_double(r.snr_db) << ','
        << r.t_samples << ',' << r.ar_order << ',' << r.g_trials << ','
        << r.seed << ',' << io::format_double(r.emd) << ','
        << io::format_double(r.tce) << ',' << io::format_double(r.nmse) << ','
        << io::format_double(r.similarity_error) << ','
        << io::format_double(r.runtime_seconds) << ',' << r.iterations
        << '\n';
  }
}

struct CellStats {
  std::vector<double> emd, tce, nmse, sim, runtime;
};

void write_summary_csv(const fs::path& path, const std::vector<BenchRow>& rows) {
  // Cells keyed by (solver, snr, t, p, g) in first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, CellStats> cells;
  std::map<std::string, BenchRow> heads;
  for (const BenchRow& r : rows) {
    char key[160];
    std::snprintf(key, sizeof(key), "%s|%.6f|%lld|%d|%lld", r.solver.c_str(),
                  r.snr_db, static_cast<long long>(r.t_samples), r.ar_order,
                  static_cast<long long>(r.g_trials));
    if (!cells.count(key)) {
      order.push_back(key);
      heads.emplace(key, r);
    }
    CellStats& c = cells[key];
    c.emd.push_back(r.emd);
    c.tce.push_back(r.tce);
    c.nmse.push_back(r.nmse);
    c.sim.push_back(r.similarity_error);
    c.runtime.push_back(r.runtime_seconds);
  }

  const auto mean = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
  };
  const auto sem = [&](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    var /= static_cast<double>(v.size() - 1);
    return std::sqrt(var / static_cast<double>(v.size()));
  };

  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "solver,snr_db,t_samples,ar_order,g_trials,n_seeds,"
         "emd_mean,emd_sem,tce_mean,tce_sem,nmse_mean,nmse_sem,"
         "similarity_error_mean,similarity_error_sem,"
         "runtime_seconds_mean,runtime_seconds_sem\n";
  for (const std::string& key : order) {
    const BenchRow& h = heads.at(key);
    const CellStats& c = cells.at(key);
    out << h.solver << ',' << io::format_double(h.snr_db) << ','
        << h.t_samples << ',' << h.ar_order << ',' << h.g_trials << ','
        << c.emd.size() << ',' << io::format_double(mean(c.emd)) << ','
        << io::format_double(sem(c.emd)) << ','
        << io::format_double(mean(c.tce)) << ','
        << io::format_double(sem(c.tce)) << ','
        << io::format_double(mean(c.nmse)) << ','
        << io::format_double(sem(c.nmse)) << ','
        << io::format_double(mean(c.sim)) << ','
        << io::format_double(sem(c.sim)) << ','
        << io::format_double(mean(c.runtime)) << ','
        << io::format_double(sem(c.runtime)) << '\n';
  }
}

int cmd_benchmark(const RunConfig& run) {
  std::vector<BenchRow> rows;
  for (const double alpha : run.alphas) {
    for (const Index t : run.t_list) {
      for (const int p : run.p_list) {
        for (const std::uint64_t seed : run.seeds) {
          RunConfig cell = run;
          cell.sim.alpha = alpha;
          cell.sim.t_samples = t;
          cell.sim.ar_order = p;
          cell.sim.seed = seed;
          cell.mode = "ar";
          const Dataset data = make_ar_dataset(cell.sim);
          for (const std::string& solver : run.solvers) {
            FitConfig config = fit_config_of(cell);
            config.seed = cell.sim.seed + 7919;  // decouple init from data
            rows.push_back(
                evaluate(solver, data, config, cell, cell.sim.seed));
          }
        }
      }
    }
  }
  const fs::path out(run.out_dir);
  fs::create_directories(out);
  write_results_csv(out / "results.csv", rows);
  write_summary_csv(out / "summary.csv", rows);
  std::cout << "wrote " << rows.size() << " rows to "
            << (out / "results.csv").string() << '\n';
  return 0;
}

int cmd_cov_recovery(const RunConfig& run) {
  std::vector<BenchRow> rows;
  for (const Index g : run.g_list) {
    for (const std::uint64_t seed : run.seeds) {
      RunConfig cell = run;
      cell.sim.g_trials = g;
      cell.sim.seed = seed;
      const Dataset data = make_kron_dataset(cell.sim, cell.kind);
      for (const std::string& solver : run.solvers) {
        FitConfig config = fit_config_of(cell);
        config.seed = cell.sim.seed + 7919;
        rows.push_back(evaluate(solver, data, config, cell, cell.sim.seed));
      }
    }
  }
  const fs::path out(run.out_dir);
  fs::create_directories(out);
  write_results_csv(out / "results.csv", rows);
  write_summary_csv(out / "summary.csv", rows);
  std::cout << "wrote " << rows.size() << " rows to "
            << (out / "results.csv").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

void add_sim_flags(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--n", run.sim.n_sources, "Number of sources");
  cmd->add_option("--n-active", run.sim.n_active, "Number of active sources");
  cmd->add_option("--m", run.sim.m_sensors, "Number of sensors");
  cmd->add_option("--t", run.sim.t_samples, "Samples per trial");
  cmd->add_option("--g", run.sim.g_trials, "Number of trials");
  cmd->add_option("--p", run.sim.ar_order, "AR order");
  cmd->add_option("--alpha", run.sim.alpha, "Mixing parameter in (0,1)");
  cmd->add_option("--beta", run.sim.beta, "AR(1) Toeplitz parameter");
  cmd->add_option("--seed", run.sim.seed, "Random seed");
}

void add_fit_flags(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--epsilon", run.epsilon, "Convergence threshold");
  cmd->add_option("--k-max", run.k_max, "Iteration cap");
  cmd->add_flag("--homoscedastic", run.homoscedastic,
                "Tie all noise variances to one value");
  cmd->add_flag("--parallel", run.parallel,
                "Run per-trial kernels across OpenMP threads");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig run;
  run.sim.n_sources = 8;
  run.sim.n_active = 2;
  run.sim.m_sensors = 5;
  run.sim.t_samples = 10;
  run.sim.g_trials = 1;
  run.out_dir = default_out_dir();

  CLI::App app{"Type-II Bayesian solvers for spatio-temporal source imaging"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  sim->set_config("--config");
  add_sim_flags(sim, run);
  sim->add_option("--mode", run.mode, "Ground-truth type")
      ->check(CLI::IsMember({"ar", "kron"}));
  sim->add_option("--kind", run.kind, "Temporal covariance for kron mode")
      ->check(CLI::IsMember({"toeplitz_ar1", "full_random"}));
  sim->add_option("--out", run.out_dir, "Output directory");

  auto* fit = app.add_subcommand("fit", "Run a solver on a dataset");
  fit->set_config("--config");
  fit->add_option("--data", run.data_dir, "Dataset directory")->required();
  fit->add_option("--solver", run.solver, "Solver")
      ->check(CLI::IsMember({"full", "thin", "champagne"}));
  fit->add_option("--seed", run.sim.seed, "Initialization seed");
  add_fit_flags(fit, run);
  fit->add_option("--out", run.out_dir, "Output directory");

  auto* bench = app.add_subcommand(
      "benchmark", "Sweep SNR x T x AR-order cells over seeds and solvers");
  bench->set_config("--config");
  add_sim_flags(bench, run);
  add_fit_flags(bench, run);
  bench->add_option("--solvers", run.solvers, "Solvers to compare")
      ->delimiter(',');
  bench->add_option("--alphas", run.alphas, "Mixing parameters")
      ->delimiter(',');
  bench->add_option("--t-list", run.t_list, "Trial lengths")->delimiter(',');
  bench->add_option("--p-list", run.p_list, "AR orders")->delimiter(',');
  bench->add_option("--seeds", run.seeds, "Seeds, comma separated")
      ->delimiter(',');
  bench->add_option("--out", run.out_dir, "Output directory");

  auto* cov = app.add_subcommand(
      "cov-recovery", "Temporal-covariance recovery across trial counts");
  cov->set_config("--config");
  add_sim_flags(cov, run);
  add_fit_flags(cov, run);
  cov->add_option("--solvers", run.solvers, "Solvers to compare")
      ->delimiter(',');
  cov->add_option("--kind", run.kind, "Temporal covariance kind")
      ->check(CLI::IsMember({"toeplitz_ar1", "full_random"}));
  cov->add_option("--g-list", run.g_list, "Trial counts")->delimiter(',');
  cov->add_option("--seeds", run.seeds, "Seeds, comma separated")
      ->delimiter(',');
  cov->add_option("--out", run.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(run);
    if (fit->parsed()) return cmd_fit(run);
    if (bench->parsed()) return cmd_benchmark(run);
    if (cov->parsed()) return cmd_cov_recovery(run);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
