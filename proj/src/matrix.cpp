#include "jsr/matrix.hpp"

#include <stdexcept>
#include <string>

namespace jsr {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0)
    throw std::invalid_argument("Matrix: dimensions must be positive");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0) throw std::invalid_argument("Matrix::from_rows: no rows");
  const std::size_t cols = rows.begin()->size();
  Matrix m(rows.size(), cols);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != cols)
      throw std::invalid_argument("Matrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
}

void axpy(double alpha, const Matrix& x, Matrix& y) {
  require_same_shape(x, y, "axpy");
  double* yd = y.data();
  const double* xd = x.data();
  for (std::size_t i = 0; i < x.size(); ++i) yd[i] += alpha * xd[i];
}

Matrix linear_comb(double alpha, const Matrix& x, double beta, const Matrix& y) {
  require_same_shape(x, y, "linear_comb");
  Matrix out(x.rows(), x.cols());
  double* od = out.data();
  const double* xd = x.data();
  const double* yd = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) od[i] = alpha * xd[i] + beta * yd[i];
  return out;
}

Matrix scaled(const Matrix& x, double alpha) {
  Matrix out(x.rows(), x.cols());
  double* od = out.data();
  const double* xd = x.data();
  for (std::size_t i = 0; i < x.size(); ++i) od[i] = alpha * xd[i];
  return out;
}

}  // namespace jsr
