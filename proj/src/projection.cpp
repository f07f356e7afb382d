#include "jsr/projection.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "jsr/core.hpp"
#include "jsr/linalg.hpp"

namespace jsr {

std::vector<std::size_t> top_rows_by_value(const std::vector<double>& values, std::size_t s) {
  if (s == 0 || s > values.size())
    throw std::invalid_argument("top_rows_by_value: budget out of range");
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;  // ties keep the smaller index
  };
  std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(), before);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Matrix project_row_sparse(const Matrix& x, std::size_t s) {
  if (s == 0 || s > x.rows())
    throw std::invalid_argument("project_row_sparse: budget must be in [1, rows]");
  if (s == x.rows()) return x;
  const auto kept = top_rows_by_value(row_norms(x), s);
  Matrix out(x.rows(), x.cols());
  for (std::size_t i : kept)
    std::memcpy(out.row(i), x.row(i), x.cols() * sizeof(double));
  return out;
}

std::size_t spark_estimate(std::size_t measurement_count) {
  if (measurement_count == 0)
    throw std::invalid_argument("spark_estimate: measurement count must be positive");
  return measurement_count + 1;
}

std::size_t numeric_rank(const Matrix& y, double tol) {
  if (tol < 0.0) throw std::invalid_argument("numeric_rank: negative tolerance");
  const auto sv = linalg::singular_values(y);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = tol * sv.front();
  std::size_t r = 0;
  for (double s : sv)
    if (s > cut) ++r;
  return r;
}

SparsityBudget sparsity_budget(std::size_t phi_rows, const Matrix& y) {
  SparsityBudget b;
  b.spark_estimate = spark_estimate(phi_rows);
  b.rank_y = numeric_rank(y);
  const std::size_t sum = b.spark_estimate + b.rank_y;
  b.s = sum >= 2 ? (sum - 2) / 2 : 0;
  if (b.s < 1) b.s = 1;
  return b;
}

}  // namespace jsr
