#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "xicor/dep_tests.hpp"
#include "xicor/manifold_gen.hpp"
#include "xicor/matrix.hpp"
#include "xicor/null_constants.hpp"

namespace xicor {

/// A response vector with its predictor rows.
struct Dataset {
  Matrix x;
  std::vector<double> y;
};

/// Reads `y,x1,...,xD` CSV with a header row. Column order is taken from the
/// header; the `y` column may appear anywhere. Blank lines are skipped.
/// Throws ParseError naming the 1-based line on malformed input.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);

/// Writes `y,x1..xD` with full round-trip precision.
void write_dataset_csv(std::ostream& out, const Matrix& x, const std::vector<double>& y);

/// JSON sidecar describing how a dataset was generated.
std::string scenario_metadata_json(const ScenarioSpec& spec, const GeneratedData& data);

inline constexpr const char* kConstantsCsvHeader = "m,q_m,o_m,sigma2,o_m_stderr,source";
void write_constants_csv(std::ostream& out, const std::vector<NullConstants>& rows);
std::string constants_json(const std::vector<NullConstants>& rows);

struct TestRecordContext {
  std::uint64_t seed = 0;
};

/// Single-test JSON record: method, statistic, z, p, reject, alpha, m, B, seed.
std::string test_result_json(const TestResult& result, const TestRecordContext& ctx);

}  // namespace xicor
