#pragma once

#include <vector>

#include "jsr/matrix.hpp"

namespace jsr::linalg {

// Dense kernels, OpenMP-parallel over independent output rows/columns.
// Every output element is accumulated serially in a fixed order, so results
// are bit-identical for any thread count.

Matrix transpose(const Matrix& a);

// A (m x k) * B (k x n)
Matrix matmul(const Matrix& a, const Matrix& b);

// A^T B with A (m x n), B (m x p) -> (n x p)
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

// A^T A (n x n), symmetric
Matrix column_gram(const Matrix& a);

// A A^T (m x m), symmetric
Matrix row_gram(const Matrix& a);

// a += value * I
void add_diagonal(Matrix& a, double value);

// In-place lower Cholesky factor of an SPD matrix (upper triangle is left
// stale). Throws std::runtime_error on a non-positive or non-finite pivot.
void cholesky_factor(Matrix& a);

// Solve L X = B in place, L lower triangular (rows of L addressed directly).
void forward_subst(const Matrix& lower, Matrix& x);

// Solve U X = B in place, U upper triangular (rows of U addressed directly;
// pass the transpose of a lower factor to run the second Cholesky half).
void backward_subst(const Matrix& upper, Matrix& x);

// Singular values in descending order via one-sided Jacobi on the thinner
// orientation. Accurate to high relative precision, which the rank tests
// need; intended for matrices with a small column count.
std::vector<double> singular_values(const Matrix& a);

// Serial reference implementations: the plainest possible loops, kept as the
// comparison baseline for the parallel kernels (tests and kernel_bench).
namespace ref {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
Matrix column_gram(const Matrix& a);
Matrix row_gram(const Matrix& a);
void cholesky_factor(Matrix& a);
void forward_subst(const Matrix& lower, Matrix& x);
void backward_subst(const Matrix& upper, Matrix& x);
}  // namespace ref

}  // namespace jsr::linalg
