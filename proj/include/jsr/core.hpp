#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "jsr/matrix.hpp"

namespace jsr {

// Row indices whose Euclidean norm exceeds a tolerance, ascending.
using RowSupport = std::vector<std::size_t>;

// Tolerance used when deciding whether a recovered row counts as occupied.
inline constexpr double kSupportTol = 1e-10;

// Euclidean norm of each row.
std::vector<double> row_norms(const Matrix& x);

// Number of rows with norm > tol (row-sparsity level).
std::size_t l20_norm(const Matrix& x, double tol = 0.0);

// Sum of row norms.
double l21_norm(const Matrix& x);

double frobenius_norm(const Matrix& x);

// ||a - b||_F without forming the difference.
double frobenius_distance(const Matrix& a, const Matrix& b);

// ||a - b||_F / sqrt(rows * cols); shapes must match.
double rmse(const Matrix& a, const Matrix& b);

RowSupport row_support(const Matrix& x, double tol = 0.0);

// Plain-text matrix format: first line "rows cols", then one whitespace-
// separated row per line. Readers accept any whitespace; writers emit
// full-precision doubles.
Matrix read_matrix_text(const std::string& path);
void write_matrix_text(const std::string& path, const Matrix& x);

}  // namespace jsr
