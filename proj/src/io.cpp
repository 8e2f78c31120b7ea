#include "ksglasso/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ksglasso {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

void append_row(std::string& out, const Eigen::MatrixXd& m, int r) {
  for (int c = 0; c < m.cols(); ++c) {
    if (c > 0) out += ' ';
    out += format_double(m(r, c));
  }
  out += '\n';
}

Eigen::MatrixXd read_values(std::istream& in, const std::filesystem::path& path, int rows,
                            int cols) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (!(in >> m(r, c))) fail(path, "truncated or non-numeric matrix data");
    }
  }
  return m;
}

void expect_eof(std::istream& in, const std::filesystem::path& path) {
  std::string rest;
  if (in >> rest) fail(path, "unexpected trailing content '" + rest + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(tmp, "cannot open for writing");
    out << text;
    out.flush();
    if (!out) fail(tmp, "write failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20 + 32);
  out += std::to_string(m.rows());
  out += ' ';
  out += std::to_string(m.cols());
  out += '\n';
  for (int r = 0; r < m.rows(); ++r) append_row(out, m, r);
  write_text(path, out);
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0 || rows > 1000000 || cols > 1000000) {
    fail(path, "malformed matrix header (expected 'rows cols')");
  }
  Eigen::MatrixXd m = read_values(in, path, static_cast<int>(rows), static_cast<int>(cols));
  expect_eof(in, path);
  return m;
}

void write_sym(const std::filesystem::path& path, const SymMat& m) { write_matrix(path, m.mat()); }

SymMat read_sym(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.rows() != m.cols()) fail(path, "expected a square matrix");
  try {
    return SymMat::from_dense(m);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

void write_support(const std::filesystem::path& path, const SupportMask& mask) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mask.dim, mask.dim);
  for (int i = 0; i < mask.dim; ++i) {
    for (int j = 0; j < mask.dim; ++j) {
      if (i != j && mask(i, j)) m(i, j) = 1.0;
    }
  }
  write_matrix(path, m);
}

SupportMask read_support(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.rows() != m.cols()) fail(path, "expected a square matrix");
  const int dim = static_cast<int>(m.rows());
  SupportMask mask;
  mask.dim = dim;
  mask.bits.assign(static_cast<std::size_t>(dim) * dim, 0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0) fail(path, "support entries must be 0 or 1");
      if (i == j && v != 0.0) fail(path, "support diagonal must be zero");
      if (m(i, j) != m(j, i)) fail(path, "support must be symmetric");
      mask.bits[static_cast<std::size_t>(i) * dim + j] = v != 0.0;
    }
  }
  return mask;
}

void write_observations(const std::filesystem::path& path, const ObservationSet& set) {
  std::string out;
  out.reserve(static_cast<std::size_t>(set.n()) * set.t * set.s * 20 + 32);
  out += std::to_string(set.n());
  out += ' ';
  out += std::to_string(set.t);
  out += ' ';
  out += std::to_string(set.s);
  out += '\n';
  for (int k = 0; k < set.n(); ++k) {
    if (k > 0) out += '\n';
    for (int r = 0; r < set.t; ++r) append_row(out, set.obs[static_cast<std::size_t>(k)], r);
  }
  write_text(path, out);
}

ObservationSet read_observations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  long long n = 0, t = 0, s = 0;
  if (!(in >> n >> t >> s) || n < 1 || t < 1 || s < 1 || t > 1000000 || s > 1000000) {
    fail(path, "malformed observation header (expected 'n t s')");
  }
  ObservationSet set;
  set.t = static_cast<int>(t);
  set.s = static_cast<int>(s);
  set.obs.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    set.obs.push_back(read_values(in, path, set.t, set.s));
  }
  expect_eof(in, path);
  return set;
}

void write_kv(const std::filesystem::path& path, const KvRecord& kv) {
  std::string out;
  for (const auto& [key, value] : kv) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  write_text(path, out);
}

KvRecord read_kv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  KvRecord kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(path, "line without '=': " + line);
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

}  // namespace ksglasso
