#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "jsr/core.hpp"
#include "jsr/linalg.hpp"
#include "jsr/rng.hpp"

using namespace jsr;
namespace lin = jsr::linalg;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix m(r, c);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

Matrix random_spd(std::size_t n, std::uint64_t seed) {
  const Matrix a = random_matrix(n + 8, n, seed);
  Matrix g = lin::ref::column_gram(a);
  lin::add_diagonal(g, 0.5);
  return g;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.same_shape(b));
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
  return a.same_shape(b) &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("matmul matches a hand-computed product") {
  const Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const Matrix b = Matrix::from_rows({{5.0, 6.0}, {7.0, 8.0}});
  const Matrix c = lin::matmul(a, b);
  CHECK(c(0, 0) == 19.0);
  CHECK(c(0, 1) == 22.0);
  CHECK(c(1, 0) == 43.0);
  CHECK(c(1, 1) == 50.0);
  CHECK_THROWS_AS(lin::matmul(a, Matrix(3, 2, 0.0)), std::invalid_argument);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const Matrix a = random_matrix(37, 23, 1);
  const Matrix b = random_matrix(23, 19, 2);
  CHECK(max_abs_diff(lin::matmul(a, b), lin::ref::matmul(a, b)) < 1e-12);

  const Matrix c = random_matrix(37, 29, 3);
  CHECK(max_abs_diff(lin::matmul_at_b(a, c), lin::ref::matmul_at_b(a, c)) < 1e-12);
  CHECK(max_abs_diff(lin::column_gram(a), lin::ref::column_gram(a)) < 1e-12);
  CHECK(max_abs_diff(lin::row_gram(a), lin::ref::row_gram(a)) < 1e-12);
}

TEST_CASE("matmul_at_b equals explicit transpose-then-multiply") {
  const Matrix a = random_matrix(31, 17, 4);
  const Matrix b = random_matrix(31, 11, 5);
  CHECK(max_abs_diff(lin::matmul_at_b(a, b), lin::matmul(lin::transpose(a), b)) < 1e-12);
}

TEST_CASE("gram kernels match their defining products") {
  const Matrix a = random_matrix(26, 14, 6);
  CHECK(max_abs_diff(lin::column_gram(a), lin::matmul_at_b(a, a)) < 1e-12);
  CHECK(max_abs_diff(lin::row_gram(a), lin::matmul(a, lin::transpose(a))) < 1e-12);
}

TEST_CASE("cholesky factor matches the hand example and reconstructs") {
  Matrix a = Matrix::from_rows({{4.0, 2.0}, {2.0, 3.0}});
  lin::cholesky_factor(a);
  CHECK(a(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  // random SPD: L L^T must reconstruct the input (lower triangle carries L)
  const Matrix spd = random_spd(83, 7);
  Matrix f = spd;
  lin::cholesky_factor(f);
  Matrix l(f.rows(), f.cols(), 0.0);
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) l(i, j) = f(i, j);
  const Matrix rebuilt = lin::matmul(l, lin::transpose(l));
  CHECK(frobenius_distance(rebuilt, spd) / frobenius_norm(spd) < 1e-13);
}

TEST_CASE("blocked cholesky agrees with the unblocked reference") {
  const Matrix spd = random_spd(97, 8);  // crosses two block boundaries
  Matrix f1 = spd, f2 = spd;
  lin::cholesky_factor(f1);
  lin::ref::cholesky_factor(f2);
  double d = 0.0;
  for (std::size_t i = 0; i < f1.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) d = std::max(d, std::abs(f1(i, j) - f2(i, j)));
  CHECK(d < 1e-11);
}

TEST_CASE("cholesky rejects non-SPD input") {
  Matrix notspd = Matrix::from_rows({{1.0, 2.0}, {2.0, 1.0}});  // eigenvalues 3, -1
  CHECK_THROWS_AS(lin::cholesky_factor(notspd), std::runtime_error);
  Matrix rect(2, 3, 0.0);
  CHECK_THROWS_AS(lin::cholesky_factor(rect), std::invalid_argument);
}

TEST_CASE("triangular solves invert the factorization") {
  const Matrix spd = random_spd(61, 9);
  Matrix f = spd;
  lin::cholesky_factor(f);
  const Matrix upper = lin::transpose(f);

  const Matrix x_true = random_matrix(61, 7, 10);
  Matrix rhs = lin::matmul(spd, x_true);
  lin::forward_subst(f, rhs);
  lin::backward_subst(upper, rhs);
  CHECK(frobenius_distance(rhs, x_true) / frobenius_norm(x_true) < 1e-11);

  // reference substitution agrees
  Matrix rhs2 = lin::matmul(spd, x_true);
  lin::ref::forward_subst(f, rhs2);
  lin::ref::backward_subst(upper, rhs2);
  CHECK(max_abs_diff(rhs, rhs2) < 1e-10);
}

TEST_CASE("kernel outputs are bit-identical across thread counts") {
  const Matrix a = random_matrix(120, 90, 11);
  const Matrix b = random_matrix(90, 40, 12);
  const Matrix spd = random_spd(120, 13);
  const Matrix rhs0 = random_matrix(120, 16, 14);

  const int saved = omp_get_max_threads();

  omp_set_num_threads(1);
  const Matrix p1 = lin::matmul(a, b);
  const Matrix g1 = lin::column_gram(a);
  const Matrix r1 = lin::row_gram(a);
  Matrix f1 = spd;
  lin::cholesky_factor(f1);
  Matrix x1 = rhs0;
  lin::forward_subst(f1, x1);

  omp_set_num_threads(4);
  const Matrix p4 = lin::matmul(a, b);
  const Matrix g4 = lin::column_gram(a);
  const Matrix r4 = lin::row_gram(a);
  Matrix f4 = spd;
  lin::cholesky_factor(f4);
  Matrix x4 = rhs0;
  lin::forward_subst(f4, x4);

  omp_set_num_threads(saved);

  CHECK(bitwise_equal(p1, p4));
  CHECK(bitwise_equal(g1, g4));
  CHECK(bitwise_equal(r1, r4));
  CHECK(bitwise_equal(x1, x4));
  // factor comparison restricted to the meaningful triangle
  bool same = true;
  for (std::size_t i = 0; i < f1.rows() && same; ++i)
    for (std::size_t j = 0; j <= i && same; ++j)
      same = std::memcmp(&f1(i, j), &f4(i, j), sizeof(double)) == 0;
  CHECK(same);
}

TEST_CASE("singular values: known spectra and invariants") {
  // diagonal rectangle: singular values are the absolute diagonal entries
  Matrix d(4, 3, 0.0);
  d(0, 0) = 3.0;
  d(1, 1) = -2.0;
  d(2, 2) = 0.5;
  const auto sv = lin::singular_values(d);
  REQUIRE(sv.size() == 3);
  CHECK(sv[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sv[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sv[2] == doctest::Approx(0.5).epsilon(1e-14));

  // sum of squares equals the squared Frobenius norm; descending order
  const Matrix a = random_matrix(40, 6, 15);
  const auto s = lin::singular_values(a);
  REQUIRE(s.size() == 6);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += s[i] * s[i];
    if (i) CHECK(s[i] <= s[i - 1]);
  }
  const double fro2 = frobenius_norm(a) * frobenius_norm(a);
  CHECK(sum == doctest::Approx(fro2).epsilon(1e-12));

  // wide input uses the transposed orientation
  const auto sw = lin::singular_values(lin::transpose(a));
  REQUIRE(sw.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(sw[i] == doctest::Approx(s[i]).epsilon(1e-11));
}

TEST_CASE("singular values resolve tiny spectra with relative accuracy") {
  // rank-2 product of random factors: the third singular value must come out
  // many orders below the largest, not at the square root of machine noise
  const Matrix u = random_matrix(9, 2, 16);
  const Matrix v = random_matrix(2, 5, 17);
  const Matrix a = lin::matmul(u, v);
  const auto s = lin::singular_values(a);
  REQUIRE(s.size() == 5);
  CHECK(s[1] > 1e-2);
  CHECK(s[2] < 1e-12 * s[0]);
  CHECK(s[4] < 1e-12 * s[0]);
}

TEST_CASE("transpose round-trips") {
  const Matrix a = random_matrix(13, 29, 18);
  const Matrix tt = lin::transpose(lin::transpose(a));
  CHECK(bitwise_equal(a, tt));
}
