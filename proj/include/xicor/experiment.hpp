#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xicor/dep_tests.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/null_constants.hpp"

namespace xicor {

struct ExperimentConfig {
  std::vector<Model> cases{Model::gaussian};
  std::vector<Transform> transforms{Transform::linear_embed};
  std::vector<int> m_grid{1};
  std::vector<double> rho_grid{0.0};
  std::size_t n = 100;
  int reps = 1000;
  double alpha = 0.05;
  std::vector<TestMethod> methods{TestMethod::xi_asymptotic};
  int permutations = kDefaultPermutations;
  std::uint64_t master_seed = 1;
  /// 0 means the OpenMP default.
  int threads = 0;

  std::uint64_t om_samples = kDefaultOmSamples;
  ConstantSource constants_source = ConstantSource::monte_carlo;
  Alternative alternative = Alternative::two_sided;
};

/// Throws InvalidInput when a field is out of range.
void validate(const ExperimentConfig& config);

/// Parses the JSON form. Unknown keys are rejected.
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct PowerRecord {
  Model model = Model::gaussian;
  Transform transform = Transform::identity;
  int m = 1;
  double rho = 0.0;
  TestMethod method = TestMethod::xi_asymptotic;
  std::size_t n = 0;
  int reps = 0;
  std::int64_t rejections = 0;
  double rejection_rate = 0.0;
  double mc_stderr = 0.0;
  std::optional<std::string> r_matrix_hash;
  std::int64_t elapsed_ms = 0;
  /// Set when the grid cell was not run (e.g. infeasible gaussian rho).
  std::optional<std::string> skipped_reason;
};

/// Called after each finished replicate task with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs every (case, transform, m, rho) cell `reps` times and tallies
/// rejections per method. Replicate r of a cell uses the data seed
/// (master_seed, cell parameters, r), so a cell reproduces in any grid that
/// contains it; the embedding matrix for dimension m uses
/// (master_seed, m) and is shared by every case and rho. Records come back
/// sorted by (case, transform, m, rho, method) and do not depend on the thread
/// count.
std::vector<PowerRecord> run_experiment(const ExperimentConfig& config,
                                        const ProgressFn& progress = {});

/// The r_seed used for the linear embedding of dimension m.
std::uint64_t embedding_seed(std::uint64_t master_seed, int m);

inline constexpr const char* kPowerCsvHeader =
    "case,transform,m,rho,method,n,reps,rejection_rate,mc_stderr,r_matrix_hash,elapsed_ms";

void write_power_csv(std::ostream& out, const std::vector<PowerRecord>& records);

}  // namespace xicor
