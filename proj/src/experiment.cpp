#include "xicor/experiment.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "json.hpp"
#include "xicor/error.hpp"
#include "xicor/parallel.hpp"
#include "xicor/random.hpp"

namespace xicor {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kDataStream = 0x44;       // 'D'
constexpr std::uint64_t kEmbedStream = 0x45;      // 'E'
constexpr std::uint64_t kPermStream = 0x50;       // 'P'
constexpr std::uint64_t kConstantsStream = 0x43;  // 'C'

struct Cell {
  Model model;
  Transform transform;
  int m;
  double rho;
  std::optional<std::string> skipped;
  std::optional<std::string> r_hash;
  /// Seed path of the cell, derived from its parameters rather than its grid
  /// position so a cell gives the same data in any config that contains it.
  std::uint64_t key = 0;
};

std::uint64_t cell_key(Model model, Transform transform, int m, double rho) {
  return derive_seed(std::bit_cast<std::uint64_t>(rho),
                     {static_cast<std::uint64_t>(model), static_cast<std::uint64_t>(transform),
                      static_cast<std::uint64_t>(m)});
}

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const json& j, const char* key, Parse parse) {
  if (!j.is_array()) throw InvalidInput(std::string("config key '") + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : j) out.push_back(parse(e));
  return out;
}

}  // namespace

std::uint64_t embedding_seed(std::uint64_t master_seed, int m) {
  return derive_seed(master_seed, {kEmbedStream, static_cast<std::uint64_t>(m)});
}

void validate(const ExperimentConfig& c) {
  if (c.cases.empty() || c.transforms.empty() || c.m_grid.empty() || c.rho_grid.empty() ||
      c.methods.empty()) {
    throw InvalidInput("experiment grids must be non-empty");
  }
  if (c.reps < 1) throw InvalidInput("reps must be >= 1");
  if (c.n < 4) throw InvalidInput("n must be >= 4");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  for (int m : c.m_grid) {
    if (m < 1) throw InvalidInput("m_grid entries must be >= 1");
  }
  for (double r : c.rho_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("rho_grid entries must be >= 0");
  }
  const bool needs_perm = std::any_of(c.methods.begin(), c.methods.end(), [](TestMethod t) {
    return t != TestMethod::xi_asymptotic;
  });
  if (needs_perm && c.permutations < 19) throw InvalidInput("B must be >= 19");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");

  static const std::set<std::string> known = {
      "cases",   "transforms", "m_grid", "rho_grid", "n",       "reps",
      "alpha",   "methods",    "B",      "master_seed", "threads", "om_samples",
      "constants_source", "alternative"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw InvalidInput("unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  try {
    if (j.contains("cases"))
      c.cases = parse_list<Model>(j["cases"], "cases",
                                  [](const json& e) { return parse_model(e.get<std::string>()); });
    if (j.contains("transforms"))
      c.transforms = parse_list<Transform>(
          j["transforms"], "transforms",
          [](const json& e) { return parse_transform(e.get<std::string>()); });
    if (j.contains("m_grid"))
      c.m_grid = parse_list<int>(j["m_grid"], "m_grid", [](const json& e) { return e.get<int>(); });
    if (j.contains("rho_grid"))
      c.rho_grid = parse_list<double>(j["rho_grid"], "rho_grid",
                                      [](const json& e) { return e.get<double>(); });
    if (j.contains("methods"))
      c.methods = parse_list<TestMethod>(
          j["methods"], "methods", [](const json& e) { return parse_method(e.get<std::string>()); });
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("reps")) c.reps = j["reps"].get<int>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("B")) c.permutations = j["B"].get<int>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("threads")) {
      c.threads = j["threads"].is_string() && j["threads"] == "auto" ? 0 : j["threads"].get<int>();
    }
    if (j.contains("om_samples")) c.om_samples = j["om_samples"].get<std::uint64_t>();
    if (j.contains("constants_source"))
      c.constants_source = parse_constant_source(j["constants_source"].get<std::string>());
    if (j.contains("alternative"))
      c.alternative = parse_alternative(j["alternative"].get<std::string>());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad config value: ") + e.what());
  }
  validate(c);
  return c;
}

std::vector<PowerRecord> run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  validate(config);
  if (config.threads > 0) set_num_threads(config.threads);

  std::vector<Cell> cells;
  for (Model model : config.cases) {
    for (Transform transform : config.transforms) {
      for (int m : config.m_grid) {
        for (double rho : config.rho_grid) {
          Cell cell{model, transform, m, rho, std::nullopt, std::nullopt,
                    cell_key(model, transform, m, rho)};
          ScenarioSpec spec{model, transform, m, rho, config.n, 0, embedding_seed(config.master_seed, m)};
          try {
            validate(spec);
          } catch (const InvalidInput& e) {
            cell.skipped = e.what();
          }
          if (transform == Transform::linear_embed) {
            cell.r_hash = matrix_hash(linear_embedding_matrix(m, spec.r_seed));
          }
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  // Null constants per dimension, computed before the replicate loop.
  std::map<int, NullConstants> constants;
  const bool need_constants =
      std::find(config.methods.begin(), config.methods.end(), TestMethod::xi_asymptotic) !=
      config.methods.end();
  if (need_constants) {
    for (int m : config.m_grid) {
      if (!constants.contains(m)) {
        constants.emplace(m, null_variance(m, config.constants_source, config.om_samples,
                                           derive_seed(config.master_seed, {kConstantsStream})));
      }
    }
  }

  const std::size_t n_methods = config.methods.size();
  const auto reps = static_cast<std::size_t>(config.reps);
  const std::size_t n_tasks = cells.size() * reps;
  std::vector<std::uint8_t> rejected(n_tasks * n_methods, 0);
  std::vector<std::int64_t> task_us(n_tasks, 0);
  std::vector<std::string> errors(n_tasks);
  std::size_t done = 0;

  const auto s_tasks = static_cast<std::int64_t>(n_tasks);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t st = 0; st < s_tasks; ++st) {
    const auto t = static_cast<std::size_t>(st);
    const std::size_t c = t / reps;
    const std::size_t r = t % reps;
    const Cell& cell = cells[c];
    if (cell.skipped) continue;
    const auto start = std::chrono::steady_clock::now();
    try {
      const std::uint64_t data_seed = derive_seed(config.master_seed, {kDataStream, cell.key, r});
      const ScenarioSpec spec{cell.model,        cell.transform, cell.m,
                              cell.rho,          config.n,       data_seed,
                              embedding_seed(config.master_seed, cell.m)};
      const GeneratedData data = generate(spec);
      const PointCloud x(data.x);
      for (std::size_t k = 0; k < n_methods; ++k) {
        const std::uint64_t perm_seed = derive_seed(
            config.master_seed,
            {kPermStream, cell.key, r, static_cast<std::uint64_t>(config.methods[k])});
        TestResult res;
        switch (config.methods[k]) {
          case TestMethod::xi_asymptotic:
            res = xi_test_asymptotic(x, data.y, cell.m, config.alpha, constants.at(cell.m),
                                     config.alternative);
            break;
          case TestMethod::xi_permutation:
            res = xi_test_permutation(x, data.y, config.alpha, config.permutations, perm_seed,
                                      config.alternative);
            break;
          case TestMethod::dcor_permutation:
            res = dcor_test_permutation(x, data.y, config.alpha, config.permutations, perm_seed);
            break;
        }
        rejected[t * n_methods + k] = res.reject ? 1 : 0;
      }
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
    task_us[t] = std::chrono::duration_cast<std::chrono::microseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    if (progress) {
#pragma omp critical(xicor_progress)
      progress(++done, n_tasks);
    }
  }

  for (std::size_t t = 0; t < n_tasks; ++t) {
    if (!errors[t].empty()) throw Error("replicate " + std::to_string(t) + " failed: " + errors[t]);
  }

  std::vector<PowerRecord> records;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    std::int64_t us = 0;
    for (std::size_t r = 0; r < reps; ++r) us += task_us[c * reps + r];
    for (std::size_t k = 0; k < n_methods; ++k) {
      PowerRecord rec;
      rec.model = cell.model;
      rec.transform = cell.transform;
      rec.m = cell.m;
      rec.rho = cell.rho;
      rec.method = config.methods[k];
      rec.n = config.n;
      rec.reps = config.reps;
      rec.r_matrix_hash = cell.r_hash;
      rec.elapsed_ms = us / 1000;
      if (cell.skipped) {
        rec.skipped_reason = cell.skipped;
        rec.rejection_rate = std::nan("");
        rec.mc_stderr = std::nan("");
      } else {
        for (std::size_t r = 0; r < reps; ++r) rec.rejections += rejected[(c * reps + r) * n_methods + k];
        const double p = static_cast<double>(rec.rejections) / static_cast<double>(reps);
        rec.rejection_rate = p;
        rec.mc_stderr = std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
      }
      records.push_back(std::move(rec));
    }
  }
  std::stable_sort(records.begin(), records.end(), [](const PowerRecord& a, const PowerRecord& b) {
    return std::tuple(static_cast<int>(a.model), static_cast<int>(a.transform), a.m, a.rho,
                      static_cast<int>(a.method)) <
           std::tuple(static_cast<int>(b.model), static_cast<int>(b.transform), b.m, b.rho,
                      static_cast<int>(b.method));
  });
  return records;
}

void write_power_csv(std::ostream& out, const std::vector<PowerRecord>& records) {
  out << kPowerCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.model) << ',' << to_string(r.transform) << ',' << r.m << ','
        << format_g6(r.rho) << ',' << to_string(r.method) << ',' << r.n << ',' << r.reps << ',';
    if (r.skipped_reason) {
      out << "NA,NA,";
    } else {
      out << format_g6(r.rejection_rate) << ',' << format_g6(r.mc_stderr) << ',';
    }
    out << r.r_matrix_hash.value_or("") << ',' << r.elapsed_ms << '\n';
  }
}

}  // namespace xicor
