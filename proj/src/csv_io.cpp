#include "xicor/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "xicor/error.hpp"

namespace xicor {

namespace {

using json = nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no, std::size_t column) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError(line_no, "column " + std::to_string(column + 1) + ": '" + std::string(field) +
                                  "' is not a finite number");
  }
  return v;
}

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> y_col;
  std::size_t n_cols = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");
  {
    const auto header = split(line);
    n_cols = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == "y") {
        if (y_col) throw ParseError(line_no, "duplicate 'y' column");
        y_col = c;
      }
    }
    if (!y_col) throw ParseError(line_no, "header has no 'y' column");
    if (n_cols < 2) throw ParseError(line_no, "header needs 'y' and at least one x column");
  }

  std::vector<double> xs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != n_cols) {
      throw ParseError(line_no, "expected " + std::to_string(n_cols) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      const double v = parse_number(fields[c], line_no, c);
      if (c == *y_col) {
        ys.push_back(v);
      } else {
        xs.push_back(v);
      }
    }
  }
  if (ys.empty()) throw ParseError(line_no, "no data rows");
  return {Matrix(ys.size(), n_cols - 1, std::move(xs)), std::move(ys)};
}

Dataset read_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Matrix& x, const std::vector<double>& y) {
  if (x.rows() != y.size()) throw InvalidInput("x and y lengths differ");
  out << 'y';
  for (std::size_t c = 0; c < x.cols(); ++c) out << ",x" << (c + 1);
  out << '\n';
  for (std::size_t i = 0; i < y.size(); ++i) {
    out << format_exact(y[i]);
    for (double v : x.row(i)) out << ',' << format_exact(v);
    out << '\n';
  }
}

std::string scenario_metadata_json(const ScenarioSpec& spec, const GeneratedData& data) {
  json j;
  j["case"] = to_string(spec.model);
  j["transform"] = to_string(spec.transform);
  j["m"] = spec.m;
  j["rho"] = spec.rho;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["r_seed"] = spec.r_seed;
  j["ambient_dim"] = data.x.cols();
  j["r_matrix_hash"] = data.r_hash ? json(*data.r_hash) : json(nullptr);
  return j.dump(2);
}

void write_constants_csv(std::ostream& out, const std::vector<NullConstants>& rows) {
  out << kConstantsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.m << ',' << format_g6(r.q_m) << ',' << format_g6(r.o_m) << ',' << format_g6(r.sigma2)
        << ',' << format_g6(r.o_m_stderr) << ',' << to_string(r.source) << '\n';
  }
}

std::string constants_json(const std::vector<NullConstants>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"m", r.m},
                   {"q_m", r.q_m},
                   {"o_m", r.o_m},
                   {"sigma2", r.sigma2},
                   {"o_m_stderr", r.o_m_stderr},
                   {"source", to_string(r.source)}});
  }
  return arr.dump(2);
}

std::string test_result_json(const TestResult& r, const TestRecordContext& ctx) {
  json j;
  j["method"] = to_string(r.method);
  j["alternative"] = to_string(r.alternative);
  j["statistic"] = r.statistic;
  j["z"] = r.z_score ? json(*r.z_score) : json(nullptr);
  j["p"] = r.p_value;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  j["m"] = r.m_used ? json(*r.m_used) : json(nullptr);
  j["B"] = r.permutations ? json(*r.permutations) : json(nullptr);
  j["seed"] = ctx.seed;
  j["degenerate"] = r.degenerate;
  return j.dump();
}

}  // namespace xicor
