#include "xicor/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "xicor/csv_io.hpp"
#include "xicor/dep_tests.hpp"
#include "xicor/error.hpp"
#include "xicor/experiment.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/nn_graph.hpp"
#include "xicor/null_constants.hpp"
#include "xicor/parallel.hpp"
#include "xicor/rank_xi.hpp"

namespace xicor {

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int threads_from_env() {
  if (const char* env = std::getenv("XICOR_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("XICOR_THREADS is not an integer: '") + env + "'");
    }
  }
  return 0;
}

std::string format_g(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Writes to `path`, or to `out` when path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  fn(file);
  if (!file) throw Error("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct ConstantsArgs {
  int m_max = 10;
  std::uint64_t om_samples = kDefaultOmSamples;
  std::uint64_t seed = 20240101;
  std::string source = "mc";
  std::string format = "csv";
  std::string out;
};

struct XiArgs {
  std::string input;
  bool strict = false;
};

struct TestArgs {
  std::string input;
  std::string method = "xi_asymptotic";
  int dim = 0;
  double alpha = 0.05;
  int permutations = kDefaultPermutations;
  std::uint64_t seed = 1;
  std::string alternative = "two_sided";
  std::string constants_source = "mc";
  std::uint64_t om_samples = kDefaultOmSamples;
};

struct SimulateArgs {
  std::string config;
  std::string out;
  int threads = 0;
  bool quiet = false;
};

struct VerifyArgs {
  int m = 1;
  std::size_t n = 10000;
  int reps = 10;
  std::string geometry = "torus";
  std::uint64_t seed = 1;
};

struct GenArgs {
  std::string model = "gaussian";
  std::string transform = "identity";
  int m = 1;
  double rho = 0.0;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::uint64_t r_seed = 1;
  std::string out;
};

int run_constants(const ConstantsArgs& a, std::ostream& out) {
  if (a.m_max < 1) throw InvalidInput("--m-max must be >= 1");
  const ConstantSource source = parse_constant_source(a.source);
  std::vector<NullConstants> rows;
  for (int m = 1; m <= a.m_max; ++m) rows.push_back(null_variance(m, source, a.om_samples, a.seed));
  with_output(a.out, out, [&](std::ostream& os) {
    if (a.format == "json") {
      os << constants_json(rows) << '\n';
    } else {
      write_constants_csv(os, rows);
    }
  });
  return 0;
}

int run_xi(const XiArgs& a, std::ostream& out) {
  const Dataset ds = read_dataset_csv_file(a.input);
  XiOptions opt;
  opt.graph.strict = a.strict;
  opt.ties = a.strict ? TiePolicy::strict : TiePolicy::permissive;
  const XiStatistic xi = xi_n(PointCloud(ds.x), ds.y, opt);
  out << format_g(xi.value, 12) << '\n';
  return 0;
}

int run_test(const TestArgs& a, std::ostream& out) {
  const Dataset ds = read_dataset_csv_file(a.input);
  const PointCloud x(ds.x);
  const TestMethod method = parse_method(a.method);
  const Alternative alt = parse_alternative(a.alternative);
  TestResult r;
  switch (method) {
    case TestMethod::xi_asymptotic: {
      if (a.dim < 1) throw InvalidInput("xi_asymptotic needs --dim >= 1");
      const NullConstants c =
          null_variance(a.dim, parse_constant_source(a.constants_source), a.om_samples);
      r = xi_test_asymptotic(x, ds.y, a.dim, a.alpha, c, alt);
      break;
    }
    case TestMethod::xi_permutation:
      r = xi_test_permutation(x, ds.y, a.alpha, a.permutations, a.seed, alt);
      break;
    case TestMethod::dcor_permutation:
      r = dcor_test_permutation(x, ds.y, a.alpha, a.permutations, a.seed);
      break;
  }
  out << test_result_json(r, {a.seed}) << '\n';
  return 0;
}

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = parse_experiment_config(read_file(a.config));
  if (a.threads > 0) {
    config.threads = a.threads;
  } else if (config.threads == 0) {
    config.threads = threads_from_env();
  }
  ProgressFn progress;
  if (!a.quiet) {
    progress = [&err, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
      const std::size_t step = std::max<std::size_t>(1, total / 100);
      if (done == total || done - last >= step) {
        last = done;
        err << "\rreplicates " << done << '/' << total << (done == total ? "\n" : "") << std::flush;
      }
    };
  }
  const auto records = run_experiment(config, progress);
  for (const auto& r : records) {
    if (r.skipped_reason) {
      err << "skipped " << to_string(r.model) << '/' << to_string(r.transform) << " m=" << r.m
          << " rho=" << r.rho << ": " << *r.skipped_reason << '\n';
    }
  }
  with_output(a.out, out, [&](std::ostream& os) { write_power_csv(os, records); });
  return 0;
}

int run_verify(const VerifyArgs& a, std::ostream& out) {
  Geometry geometry;
  if (a.geometry == "torus") {
    geometry = Geometry::torus;
  } else if (a.geometry == "cube") {
    geometry = Geometry::cube;
  } else {
    throw InvalidInput("--geometry must be cube or torus");
  }
  const EmpiricalConstants e = estimate_constants_empirical(a.m, a.n, a.reps, geometry, a.seed);
  nlohmann::json j;
  j["m"] = a.m;
  j["n"] = a.n;
  j["reps"] = a.reps;
  j["geometry"] = a.geometry;
  j["seed"] = a.seed;
  j["q_hat"] = e.q_hat;
  j["q_stderr"] = e.q_stderr;
  j["o_hat"] = e.o_hat;
  j["o_stderr"] = e.o_stderr;
  j["max_in_degree"] = e.max_in_degree;
  j["q_m_closed_form"] = q_m(a.m);
  out << j.dump(2) << '\n';
  return 0;
}

int run_gen(const GenArgs& a, std::ostream& out) {
  const ScenarioSpec spec{parse_model(a.model), parse_transform(a.transform), a.m, a.rho, a.n,
                          a.seed,               a.r_seed};
  const GeneratedData data = generate(spec);
  with_output(a.out, out, [&](std::ostream& os) { write_dataset_csv(os, data.x, data.y); });
  if (!a.out.empty() && a.out != "-") {
    std::ofstream meta(a.out + ".json");
    if (!meta) throw Error("cannot open '" + a.out + ".json' for writing");
    meta << scenario_metadata_json(spec, data) << '\n';
  }
  return 0;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-based xi_n correlation: null constants, independence tests, simulations"};
  app.name("xicor");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: XICOR_THREADS or all)");

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Null-variance constants q_m, o_m, sigma2");
  constants->add_option("--m-max", ca.m_max, "Largest dimension")->capture_default_str();
  constants->add_option("--om-samples", ca.om_samples, "Monte Carlo samples for o_m")->capture_default_str();
  constants->add_option("--seed", ca.seed, "Monte Carlo seed")->capture_default_str();
  constants->add_option("--source", ca.source, "mc | table | exact")
      ->check(CLI::IsMember({"mc", "monte_carlo", "table", "exact", "closed_form"}))
      ->capture_default_str();
  constants->add_option("--format", ca.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  constants->add_option("--out", ca.out, "Output file (default stdout)");

  XiArgs xa;
  auto* xi = app.add_subcommand("xi", "Print xi_n of a dataset");
  xi->add_option("--input", xa.input, "CSV with columns y,x1..xD")->required();
  xi->add_flag("--strict", xa.strict, "Reject duplicate points and tied responses");

  TestArgs ta;
  auto* test = app.add_subcommand("test", "Independence test on a dataset");
  test->add_option("--input", ta.input, "CSV with columns y,x1..xD")->required();
  test->add_option("--method", ta.method, "xi_asymptotic | xi_permutation | dcor_permutation")
      ->check(CLI::IsMember({"xi_asymptotic", "xi_permutation", "dcor_permutation"}))
      ->capture_default_str();
  test->add_option("--dim", ta.dim, "Manifold dimension m (xi_asymptotic)");
  test->add_option("--alpha", ta.alpha, "Level")->capture_default_str();
  test->add_option("--permutations", ta.permutations, "B")->capture_default_str();
  test->add_option("--seed", ta.seed, "Permutation seed")->capture_default_str();
  test->add_option("--alternative", ta.alternative, "two_sided | greater")
      ->check(CLI::IsMember({"two_sided", "two-sided", "greater"}))
      ->capture_default_str();
  test->add_option("--constants-source", ta.constants_source, "mc | table | exact")
      ->check(CLI::IsMember({"mc", "monte_carlo", "table", "exact", "closed_form"}))
      ->capture_default_str();
  test->add_option("--om-samples", ta.om_samples, "Monte Carlo samples for o_m")->capture_default_str();

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a size/power study from a JSON config");
  simulate->add_option("--config", sa.config, "Experiment config (JSON)")->required();
  simulate->add_option("--out", sa.out, "Result CSV (default stdout)");
  simulate->add_option("--threads", sa.threads, "OpenMP threads");
  simulate->add_flag("--quiet", sa.quiet, "No progress counter");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-nng", "Empirical NN-graph pair/triple rates");
  verify->add_option("--m", va.m, "Dimension")->capture_default_str();
  verify->add_option("--n", va.n, "Points per replicate")->capture_default_str();
  verify->add_option("--reps", va.reps, "Replicates")->capture_default_str();
  verify->add_option("--geometry", va.geometry, "cube | torus")
      ->check(CLI::IsMember({"cube", "torus"}))
      ->capture_default_str();
  verify->add_option("--seed", va.seed, "Seed")->capture_default_str();

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--case", ga.model, "gaussian | linear | quadratic | cosine | wshape")
      ->check(CLI::IsMember({"gaussian", "linear", "quadratic", "cosine", "wshape"}))
      ->capture_default_str();
  gen->add_option("--transform", ga.transform, "identity | linear_embed | manifold_embed")
      ->check(CLI::IsMember({"identity", "linear_embed", "manifold_embed", "linear", "manifold"}))
      ->capture_default_str();
  gen->add_option("--m", ga.m, "Latent dimension")->capture_default_str();
  gen->add_option("--rho", ga.rho, "Dependence strength")->capture_default_str();
  gen->add_option("--n", ga.n, "Sample size")->capture_default_str();
  gen->add_option("--seed", ga.seed, "Data seed")->capture_default_str();
  gen->add_option("--r-seed", ga.r_seed, "Embedding matrix seed")->capture_default_str();
  gen->add_option("--out", ga.out, "Dataset CSV (default stdout); metadata goes to OUT.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const int t = threads > 0 ? threads : threads_from_env();
    if (t > 0) set_num_threads(t);
    if (*constants) return run_constants(ca, out);
    if (*xi) return run_xi(xa, out);
    if (*test) return run_test(ta, out);
    if (*simulate) return run_simulate(sa, out, err);
    if (*verify) return run_verify(va, out);
    if (*gen) return run_gen(ga, out);
  } catch (const DegenerateInput& e) {
    err << "error: degenerate input: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace xicor
