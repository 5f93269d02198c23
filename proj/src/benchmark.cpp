#include "spgm/benchmark.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "spgm/applications.hpp"
#include "spgm/datasets.hpp"

namespace spgm {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// A misspelled config key should fail loudly, not fall back to a default.
void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) {
      throw std::invalid_argument("unknown key '" + it.key() + "' in " + where);
    }
  }
}

ApplicationKind application_from_name(const std::string& name) {
  if (name == "pca") return ApplicationKind::Pca;
  if (name == "fair_classification") return ApplicationKind::FairClassification;
  if (name == "portfolio") return ApplicationKind::Portfolio;
  throw std::invalid_argument("unknown application '" + name +
                              "' (expected pca, fair_classification, or portfolio)");
}

ProblemSpec parse_problem(const json& j) {
  require(j.is_object(), "config: 'problem' must be an object");
  ProblemSpec spec;
  spec.application = application_from_name(j.at("application").get<std::string>());

  std::initializer_list<const char*> common = {"application", "dataset",   "synthetic",
                                               "max_n",       "max_d",     "regularizer"};
  switch (spec.application) {
    case ApplicationKind::Pca:
      check_keys(j, "problem", common);
      break;
    case ApplicationKind::FairClassification:
      check_keys(j, "problem",
                 {"application", "dataset", "max_n", "max_d", "regularizer", "sensitive_index",
                  "covariance_cap", "regularizer_z"});
      break;
    case ApplicationKind::Portfolio:
      check_keys(j, "problem",
                 {"application", "dataset", "synthetic", "max_n", "max_d", "regularizer", "psi1",
                  "psi2"});
      break;
  }

  if (j.contains("dataset")) spec.dataset_path = j.at("dataset").get<std::string>();
  const bool synthetic = j.contains("synthetic");
  if (spec.application == ApplicationKind::FairClassification) {
    require(!spec.dataset_path.empty(),
            "fair_classification needs a labeled dataset file ('dataset')");
  } else {
    require(!spec.dataset_path.empty() != synthetic,
            "problem: give exactly one of 'dataset' and 'synthetic'");
  }
  if (synthetic) {
    const json& s = j.at("synthetic");
    check_keys(s, "problem.synthetic", {"d", "n", "sparsity", "noise_std", "seed"});
    spec.synthetic.d = s.value("d", spec.synthetic.d);
    spec.synthetic.n = s.value("n", spec.synthetic.n);
    spec.synthetic.sparsity = s.value("sparsity", spec.synthetic.sparsity);
    spec.synthetic.noise_std = s.value("noise_std", spec.synthetic.noise_std);
    spec.synthetic.seed = s.value("seed", spec.synthetic.seed);
  }
  spec.max_n = j.value("max_n", spec.max_n);
  spec.max_d = j.value("max_d", spec.max_d);

  if (j.contains("regularizer")) {
    const json& r = j.at("regularizer");
    check_keys(r, "problem.regularizer", {"kind", "kappa", "nu"});
    spec.regularizer_kind = r.value("kind", spec.regularizer_kind);
    require(spec.regularizer_kind == "mcp" || spec.regularizer_kind == "scad",
            "problem.regularizer.kind must be 'mcp' or 'scad'");
    spec.kappa = r.value("kappa", 0.0);
    spec.nu = r.value("nu", 0.0);
  }
  if (spec.application == ApplicationKind::FairClassification) {
    require(spec.regularizer_kind == "mcp",
            "fair_classification penalizes the weights with MCP; 'regularizer.kind' must be mcp");
    spec.sensitive_index = j.value("sensitive_index", spec.sensitive_index);
    spec.covariance_cap = j.value("covariance_cap", spec.covariance_cap);
    if (j.contains("regularizer_z")) {
      const json& r = j.at("regularizer_z");
      check_keys(r, "problem.regularizer_z", {"kappa", "nu"});
      spec.z_kappa = r.value("kappa", 0.0);
      spec.z_nu = r.value("nu", 0.0);
    }
  }
  if (spec.application == ApplicationKind::Portfolio) {
    spec.psi1 = j.value("psi1", spec.psi1);
    spec.psi2 = j.value("psi2", spec.psi2);
  }
  return spec;
}

SolverRun parse_solver(const json& j, std::size_t position) {
  std::ostringstream where;
  where << "solvers[" << position << "]";
  require(j.is_object(), "config: " + where.str() + " must be an object");
  check_keys(j, where.str().c_str(),
             {"name", "algorithm", "budget", "budget_grad_calls", "theta", "alpha", "tau",
              "trace_every", "trace_stationarity", "cache_snapshot_gradients",
              "check_mapping_identity"});

  SolverRun run;
  run.config.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  run.name = j.value("name", std::string(algorithm_name(run.config.algorithm)));
  require(!run.name.empty(), where.str() + ": 'name' must not be empty");

  if (j.contains("budget")) run.config.budget_N = j.at("budget").get<Index>();
  if (j.contains("budget_grad_calls")) {
    run.grad_call_target = j.at("budget_grad_calls").get<std::uint64_t>();
  }
  require(j.contains("budget") != j.contains("budget_grad_calls"),
          where.str() + ": give exactly one of 'budget' and 'budget_grad_calls'");

  run.config.theta = j.value("theta", run.config.theta);
  if (j.contains("alpha")) run.config.alpha = j.at("alpha").get<double>();
  run.config.tau = j.value("tau", run.config.tau);
  run.config.trace_every = j.value("trace_every", run.config.trace_every);
  run.config.trace_stationarity = j.value("trace_stationarity", run.config.trace_stationarity);
  run.config.cache_snapshot_gradients =
      j.value("cache_snapshot_gradients", run.config.cache_snapshot_gradients);
  run.config.check_mapping_identity =
      j.value("check_mapping_identity", run.config.check_mapping_identity);
  run.config.mode = RunMode::Trace;
  return run;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Matrix load_samples(const ProblemSpec& spec) {
  if (!spec.dataset_path.empty()) {
    return read_sparse_dataset(spec.dataset_path, spec.max_n, spec.max_d).x;
  }
  const SyntheticSpec& s = spec.synthetic;
  return generate_synthetic_pca(s.d, s.n, s.sparsity, s.seed, s.noise_std).x;
}

}  // namespace

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Mbspa:
      return "mbspa";
    case Algorithm::Vrspa:
      return "vrspa";
    case Algorithm::Vrspa2:
      return "vrspa2";
    case Algorithm::DeterministicBaseline:
      return "baseline";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mbspa") return Algorithm::Mbspa;
  if (name == "vrspa") return Algorithm::Vrspa;
  if (name == "vrspa2") return Algorithm::Vrspa2;
  if (name == "baseline") return Algorithm::DeterministicBaseline;
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (expected mbspa, vrspa, vrspa2, or baseline)");
}

BenchmarkConfig parse_benchmark_config(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    require(j.is_object(), "config: top level must be an object");
    check_keys(j, "config", {"problem", "solvers", "seeds", "output_dir", "threads"});

    BenchmarkConfig cfg;
    cfg.problem = parse_problem(j.at("problem"));

    const json& solvers = j.at("solvers");
    require(solvers.is_array() && !solvers.empty(), "config: 'solvers' must be a nonempty array");
    for (std::size_t i = 0; i < solvers.size(); ++i) {
      cfg.solvers.push_back(parse_solver(solvers[i], i));
    }
    for (std::size_t i = 0; i < cfg.solvers.size(); ++i) {
      for (std::size_t k = i + 1; k < cfg.solvers.size(); ++k) {
        require(cfg.solvers[i].name != cfg.solvers[k].name,
                "config: solver names must be unique (duplicate '" + cfg.solvers[i].name +
                    "'; set 'name' to distinguish entries)");
      }
    }

    const json& seeds = j.at("seeds");
    require(seeds.is_array() && !seeds.empty(), "config: 'seeds' must be a nonempty array");
    for (const json& s : seeds) cfg.seeds.push_back(s.get<std::uint64_t>());

    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    require(!cfg.output_dir.empty(), "config: 'output_dir' must not be empty");
    cfg.threads = j.value("threads", cfg.threads);
    require(cfg.threads >= 0, "config: 'threads' must be >= 0");
    return cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
}

BenchmarkConfig load_benchmark_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_benchmark_config(text.str());
}

CompositeProblem build_problem(const ProblemSpec& spec) {
  switch (spec.application) {
    case ApplicationKind::Pca: {
      const Matrix x = load_samples(spec);
      const double kappa = spec.kappa > 0 ? spec.kappa : 1.0 / static_cast<double>(x.rows());
      if (spec.regularizer_kind == "scad") {
        return build_pca(x, ScadParams{kappa, spec.nu > 0 ? spec.nu : 3.7});
      }
      return build_pca(x, McpParams{kappa, spec.nu > 0 ? spec.nu : 1.0});
    }
    case ApplicationKind::FairClassification: {
      const DatasetMatrix ds = read_sparse_dataset(spec.dataset_path, spec.max_n, spec.max_d);
      require(ds.labels.has_value(),
              "fair_classification needs labels; dense CSV files carry none");
      const double kappa =
          spec.kappa > 0 ? spec.kappa : 1.0 / static_cast<double>(ds.x.rows() - 1);
      const McpParams g1{kappa, spec.nu > 0 ? spec.nu : 1.0};
      const ScadParams g2{spec.z_kappa > 0 ? spec.z_kappa : kappa,
                          spec.z_nu > 0 ? spec.z_nu : 3.7};
      return build_fair_classification(ds.x, *ds.labels, spec.sensitive_index,
                                       spec.covariance_cap, g1, g2);
    }
    case ApplicationKind::Portfolio: {
      const Matrix r = load_samples(spec);
      const double kappa = spec.kappa > 0 ? spec.kappa : 1.0 / static_cast<double>(r.rows());
      if (spec.regularizer_kind == "scad") {
        return build_portfolio(r, spec.psi1, spec.psi2,
                               ScadParams{kappa, spec.nu > 0 ? spec.nu : 3.7});
      }
      return build_portfolio(r, spec.psi1, spec.psi2,
                             McpParams{kappa, spec.nu > 0 ? spec.nu : 1.0});
    }
  }
  throw std::logic_error("unreachable application kind");
}

void write_trace_csv(const std::string& path, const RunReport& report) {
  std::ostringstream out;
  out << "iter,grad_calls,prox_calls,phi,stationarity,elapsed_s\n";
  char elapsed[32];
  for (const IterationTrace& row : report.trace) {
    out << row.iteration << ',' << row.gradient_calls << ',' << row.prox_calls << ','
        << format_full(row.phi) << ',';
    if (row.stationarity.has_value()) out << format_full(*row.stationarity);
    std::snprintf(elapsed, sizeof elapsed, "%.6f", row.elapsed_seconds);
    out << ',' << elapsed << '\n';
  }
  atomic_write(path, out.str());
}

Vector uniform_feasible_start(const CompositeProblem& problem) {
  const Index d = problem.dimension();
  switch (problem.constraint().kind()) {
    case Constraint::Kind::NonnegBall:
      return Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    case Constraint::Kind::Simplex:
      return Vector::Constant(d, 1.0 / static_cast<double>(d));
    default:
      // Free and the half-space pair: the origin is feasible and the smooth
      // parts of the problems using these sets have nonzero slope there.
      return Vector::Zero(d);
  }
}

int run_benchmark(const BenchmarkConfig& config) {
  require(!config.solvers.empty(), "benchmark: at least one solver");
  require(!config.seeds.empty(), "benchmark: at least one seed");

  const CompositeProblem problem = build_problem(config.problem);
  const Index n = problem.smooth().component_count();

  // Resolve gradient-call targets into iteration budgets now that n is known.
  std::vector<SolverRun> solvers = config.solvers;
  for (SolverRun& s : solvers) {
    if (s.grad_call_target.has_value()) {
      s.config.budget_N =
          budget_for_gradient_calls(s.config.algorithm, n, *s.grad_call_target,
                                    s.config.alpha.value_or(default_alpha(s.config.algorithm)));
    }
  }

  std::filesystem::create_directories(config.output_dir);

  struct Job {
    std::size_t solver = 0;
    std::uint64_t seed = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < solvers.size(); ++s) {
    for (std::uint64_t seed : config.seeds) jobs.push_back({s, seed});
  }

  std::vector<std::string> summary_rows(jobs.size());
  std::vector<std::string> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  const Vector default_start = uniform_feasible_start(problem);

  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      const SolverRun& entry = solvers[job.solver];
      try {
        SolverConfig run_cfg = entry.config;
        run_cfg.seed = job.seed;
        run_cfg.mode = RunMode::Trace;
        if (!run_cfg.initial_point.has_value()) run_cfg.initial_point = default_start;
        const RunReport report = run_solver(problem, run_cfg);

        std::ostringstream file;
        file << entry.name << "_seed" << job.seed << ".csv";
        write_trace_csv((std::filesystem::path(config.output_dir) / file.str()).string(), report);

        const Index nnz = (report.theory_output.array() != 0.0).count();
        std::ostringstream row;
        row << entry.name << ',' << job.seed << ',' << format_full(report.trace.back().phi) << ','
            << format_full(report.stationarity) << ',' << report.counters.gradient_calls << ','
            << report.counters.prox_g_calls << ',' << report.counters.prox_h_calls << ',' << nnz;
        summary_rows[i] = row.str();
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << entry.name << " seed " << job.seed << ": " << e.what();
        failures[i] = msg.str();
      }
    }
  };

  unsigned thread_count = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(jobs.size()));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Flush what succeeded before reporting what did not.
  std::ostringstream summary;
  summary << "solver,seed,final_phi,final_stationarity,grad_calls,prox_g_calls,prox_h_calls,"
             "output_nnz\n";
  for (const std::string& row : summary_rows) {
    if (!row.empty()) summary << row << '\n';
  }
  atomic_write((std::filesystem::path(config.output_dir) / "summary.csv").string(),
               summary.str());

  std::string all_failures;
  for (const std::string& f : failures) {
    if (f.empty()) continue;
    if (!all_failures.empty()) all_failures += "; ";
    all_failures += f;
  }
  if (!all_failures.empty()) throw std::runtime_error("benchmark runs failed: " + all_failures);
  return 0;
}

}  // namespace spgm
