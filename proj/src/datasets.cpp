#include "spgm/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "spgm/rng.hpp"

namespace spgm {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw std::runtime_error(msg.str());
}

bool has_csv_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".csv";
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

// Strict double parse of a whole token; from_chars rejects the leading '+'
// some label columns carry, so strip it first.
bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

double parse_finite(std::string_view token, const std::string& path, std::size_t line,
                    const char* what) {
  double v = 0.0;
  if (!parse_double(token, v)) {
    parse_fail(path, line, std::string("cannot parse ") + what + " '" + std::string(token) + "'");
  }
  if (!std::isfinite(v)) {
    parse_fail(path, line, std::string("non-finite ") + what + " '" + std::string(token) + "'");
  }
  return v;
}

void parse_sparse_line(const std::string& line, const std::string& path, std::size_t lineno,
                       Index max_d, Vector& col, double& label) {
  std::istringstream tokens(line);
  std::string tok;
  if (!(tokens >> tok)) parse_fail(path, lineno, "missing label");
  label = parse_finite(tok, path, lineno, "label");
  col.setZero();
  while (tokens >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
      parse_fail(path, lineno, "expected idx:val, got '" + tok + "'");
    }
    const std::string_view idx_part(tok.data(), colon);
    long long idx = 0;
    const auto res = std::from_chars(idx_part.data(), idx_part.data() + idx_part.size(), idx);
    if (res.ec != std::errc{} || res.ptr != idx_part.data() + idx_part.size() || idx < 1) {
      parse_fail(path, lineno, "bad feature index in '" + tok + "' (indices are 1-based)");
    }
    const double val =
        parse_finite(std::string_view(tok).substr(colon + 1), path, lineno, "feature value");
    if (idx <= static_cast<long long>(max_d)) col(static_cast<Index>(idx - 1)) = val;
  }
}

void parse_csv_line(const std::string& line, const std::string& path, std::size_t lineno,
                    Index max_d, Vector& col) {
  col.setZero();
  Index field = 0;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::string_view tok(line.data() + pos, comma - pos);
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) {
      tok.remove_suffix(1);
    }
    const double val = parse_finite(tok, path, lineno, "entry");
    if (field < max_d) col(field) = val;
    ++field;
    pos = comma + 1;
  }
}

}  // namespace

DatasetMatrix read_sparse_dataset(const std::string& path, Index max_n, Index max_d) {
  require(max_n >= 1 && max_d >= 1, "read_sparse_dataset: sample and feature caps must be >= 1");
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);

  const bool csv = has_csv_extension(path);
  std::vector<Vector> cols;
  std::vector<double> labels;
  Vector col(max_d);
  std::string line;
  std::size_t lineno = 0;
  while (static_cast<Index>(cols.size()) < max_n && std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (csv) {
      parse_csv_line(line, path, lineno, max_d, col);
    } else {
      double label = 0.0;
      parse_sparse_line(line, path, lineno, max_d, col, label);
      labels.push_back(label);
    }
    cols.push_back(col);
  }
  if (cols.empty()) throw std::invalid_argument("dataset file has no samples: " + path);

  DatasetMatrix ds;
  ds.x.resize(max_d, static_cast<Index>(cols.size()));
  for (Index j = 0; j < ds.x.cols(); ++j) ds.x.col(j) = cols[static_cast<std::size_t>(j)];
  if (!csv) {
    ds.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Index>(labels.size()));
  }
  return ds;
}

void write_dense_csv(const std::string& path, const DatasetMatrix& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + tmp);
    char buf[40];
    for (Index j = 0; j < data.x.cols(); ++j) {
      for (Index i = 0; i < data.x.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", data.x(i, j));
        if (i > 0) out << ',';
        out << buf;
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

DatasetMatrix generate_synthetic_pca(Index d, Index n, double sparsity, std::uint64_t seed,
                                     double noise_std, Vector* planted) {
  require(d >= 1 && n >= 1, "generate_synthetic_pca: d and n must be >= 1");
  require(sparsity >= 0.0 && sparsity <= 1.0, "generate_synthetic_pca: sparsity must be in [0,1]");
  require(std::isfinite(noise_std) && noise_std >= 0.0,
          "generate_synthetic_pca: noise_std must be nonnegative");

  RngStream rng(seed);

  // Support size ~ (1-sparsity)*d, rounded up but guarded against the float
  // fuzz of expressions like 0.3*10, and never empty.
  const double raw = (1.0 - sparsity) * static_cast<double>(d);
  const double nearest = std::round(raw);
  Index support = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, std::abs(raw))
                      ? static_cast<Index>(nearest)
                      : static_cast<Index>(std::ceil(raw));
  support = std::clamp<Index>(support, 1, d);

  // Partial Fisher-Yates picks the support without replacement.
  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < support; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(d - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  Vector u = Vector::Zero(d);
  const double mag = 1.0 / std::sqrt(static_cast<double>(support));
  for (Index i = 0; i < support; ++i) {
    u(order[static_cast<std::size_t>(i)]) = rng.uniform_real() < 0.5 ? -mag : mag;
  }

  DatasetMatrix ds;
  ds.x.resize(d, n);
  for (Index j = 0; j < n; ++j) {
    const double a = rng.normal();
    ds.x.col(j) = a * u;
    // Noise variates are drawn even at noise_std == 0 so the signal part of a
    // seed's dataset does not depend on the noise level.
    for (Index i = 0; i < d; ++i) ds.x(i, j) += noise_std * rng.normal();
  }
  if (planted) *planted = std::move(u);
  return ds;
}

}  // namespace spgm
