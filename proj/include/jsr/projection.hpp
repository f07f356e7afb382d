#pragma once

#include <cstddef>
#include <vector>

#include "jsr/matrix.hpp"

namespace jsr {

// Indices of the s largest values, ties broken toward the smaller index.
// Deterministic for any input.
std::vector<std::size_t> top_rows_by_value(const std::vector<double>& values, std::size_t s);

// Euclidean projection onto {X : at most s nonzero rows}: keep the s rows of
// largest norm, zero the rest. Requires 1 <= s <= rows.
Matrix project_row_sparse(const Matrix& x, std::size_t s);

// Almost-sure spark of a generic dense M x N matrix with M < N.
std::size_t spark_estimate(std::size_t measurement_count);

// Count of singular values above tol * (largest singular value).
std::size_t numeric_rank(const Matrix& y, double tol = 1e-10);

struct SparsityBudget {
  std::size_t s;               // row-sparsity budget handed to the solver
  std::size_t spark_estimate;  // spark of the measurement matrix (estimated)
  std::size_t rank_y;          // numeric rank of the observations
};

// Largest s for which l2,0-constrained recovery stays identifiable:
// s = floor((spark + rank(Y) - 2) / 2), clamped to at least 1.
SparsityBudget sparsity_budget(std::size_t phi_rows, const Matrix& y);

}  // namespace jsr
