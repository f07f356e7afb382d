#include "jsr/core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jsr {

std::vector<double> row_norms(const Matrix& x) {
  std::vector<double> norms(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += xi[j] * xi[j];
    norms[i] = std::sqrt(s);
  }
  return norms;
}

std::size_t l20_norm(const Matrix& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("l20_norm: negative tolerance");
  std::size_t count = 0;
  for (double n : row_norms(x))
    if (n > tol) ++count;
  return count;
}

double l21_norm(const Matrix& x) {
  double s = 0.0;
  for (double n : row_norms(x)) s += n;
  return s;
}

double frobenius_norm(const Matrix& x) {
  double s = 0.0;
  const double* d = x.data();
  for (std::size_t i = 0; i < x.size(); ++i) s += d[i] * d[i];
  return std::sqrt(s);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  double s = 0.0;
  const double* ad = a.data();
  const double* bd = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = ad[i] - bd[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double rmse(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "rmse");
  return frobenius_distance(a, b) / std::sqrt(static_cast<double>(a.size()));
}

RowSupport row_support(const Matrix& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("row_support: negative tolerance");
  RowSupport support;
  const auto norms = row_norms(x);
  for (std::size_t i = 0; i < norms.size(); ++i)
    if (norms[i] > tol) support.push_back(i);
  return support;
}

Matrix read_matrix_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_text: cannot open " + path);
  std::size_t rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows == 0 || cols == 0)
    throw std::runtime_error("read_matrix_text: bad header in " + path);
  Matrix m(rows, cols);
  double* d = m.data();
  for (std::size_t i = 0; i < rows * cols; ++i) {
    if (!(in >> d[i]))
      throw std::runtime_error("read_matrix_text: truncated data in " + path);
    if (!std::isfinite(d[i]))
      throw std::runtime_error("read_matrix_text: non-finite entry in " + path);
  }
  return m;
}

void write_matrix_text(const std::string& path, const Matrix& x) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_text: cannot open " + path);
  out << x.rows() << " " << x.cols() << "\n";
  char buf[32];
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", xi[j]);
      out << buf << (j + 1 == x.cols() ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_matrix_text: write failed for " + path);
}

}  // namespace jsr
