#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "jsr/core.hpp"
#include "jsr/matrix.hpp"
#include "jsr/rng.hpp"

using namespace jsr;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix m(r, c);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("row_norms matches hand-computed values") {
  const Matrix x = Matrix::from_rows({{3.0, 4.0}, {0.0, 0.0}, {-1.0, 1.0}});
  const auto n = row_norms(x);
  CHECK(n.size() == 3);
  CHECK(n[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(n[1] == 0.0);
  CHECK(n[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("l20_norm counts occupied rows") {
  const Matrix x = Matrix::from_rows({{3.0, 4.0}, {0.0, 0.0}, {-1.0, 1.0}});
  CHECK(l20_norm(x) == 2);
  CHECK(l20_norm(x, 1.0) == 2);
  CHECK(l20_norm(x, 4.9) == 1);
  CHECK(l20_norm(x, 5.0) == 0);  // strict threshold
  CHECK(l20_norm(Matrix(4, 3, 0.0)) == 0);
  CHECK_THROWS_AS(l20_norm(x, -1.0), std::invalid_argument);
}

TEST_CASE("l20_norm is scale invariant for nonzero scalars") {
  const Matrix x = random_matrix(20, 4, 7);
  Matrix scaled_x = scaled(x, -3.7e5);
  CHECK(l20_norm(x) == l20_norm(scaled_x));
  scaled_x = scaled(x, 1e-9);
  CHECK(l20_norm(x) == l20_norm(scaled_x));
}

TEST_CASE("l21_norm sums row norms and respects permutations") {
  const Matrix x = Matrix::from_rows({{3.0, 4.0}, {5.0, 12.0}});
  CHECK(l21_norm(x) == doctest::Approx(18.0).epsilon(1e-15));

  const Matrix y = random_matrix(12, 3, 9);
  Matrix perm(12, 3);
  std::vector<std::size_t> order(12);
  for (std::size_t i = 0; i < 12; ++i) order[i] = (i * 5 + 3) % 12;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 3; ++j) perm(i, j) = y(order[i], j);
  CHECK(l21_norm(perm) == doctest::Approx(l21_norm(y)).epsilon(1e-13));
}

TEST_CASE("frobenius norm, distance, rmse") {
  const Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(frobenius_norm(a) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-15));
  CHECK(rmse(a, a) == 0.0);

  const Matrix ones(2, 2, 1.0);
  const Matrix zeros(2, 2, 0.0);
  CHECK(rmse(ones, zeros) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(frobenius_distance(ones, zeros) == doctest::Approx(2.0).epsilon(1e-15));

  // symmetry and shape checks
  const Matrix b = random_matrix(5, 3, 11);
  const Matrix c = random_matrix(5, 3, 12);
  CHECK(rmse(b, c) == doctest::Approx(rmse(c, b)).epsilon(1e-15));
  CHECK_THROWS_AS(rmse(b, Matrix(3, 5, 0.0)), std::invalid_argument);
}

TEST_CASE("row_support is sorted and consistent with l20") {
  const Matrix x = Matrix::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.5, -0.5}});
  const auto sup = row_support(x);
  CHECK(sup == RowSupport{1, 3});
  CHECK(std::is_sorted(sup.begin(), sup.end()));
  CHECK(sup.size() == l20_norm(x));
}

TEST_CASE("matrix text golden fixture reads back known values") {
  const Matrix m = read_matrix_text(std::string(JSR_TEST_DATA_DIR) + "/fixture_3x2.txt");
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 1.5);
  CHECK(m(0, 1) == -2.25);
  CHECK(m(1, 0) == 0.0);
  CHECK(m(1, 1) == 0.001);
  CHECK(m(2, 0) == 42.0);
  CHECK(m(2, 1) == -0.5);
}

TEST_CASE("matrix text write/read round-trips exactly") {
  const Matrix m = random_matrix(7, 4, 21);
  const auto path = temp_path("jsr_roundtrip.txt");
  write_matrix_text(path, m);
  const Matrix back = read_matrix_text(path);
  REQUIRE(back.same_shape(m));
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.data()[i] == m.data()[i]);
  std::filesystem::remove(path);
}

TEST_CASE("matrix text reader rejects bad input") {
  CHECK_THROWS_AS(read_matrix_text("/nonexistent/path/x.txt"), std::runtime_error);

  const auto trunc = temp_path("jsr_trunc.txt");
  {
    std::ofstream out(trunc);
    out << "2 2\n1 2\n3\n";
  }
  CHECK_THROWS_AS(read_matrix_text(trunc), std::runtime_error);

  const auto nonfinite = temp_path("jsr_nonfinite.txt");
  {
    std::ofstream out(nonfinite);
    out << "1 2\n1 nan\n";
  }
  CHECK_THROWS_AS(read_matrix_text(nonfinite), std::runtime_error);

  const auto badheader = temp_path("jsr_badheader.txt");
  {
    std::ofstream out(badheader);
    out << "0 2\n";
  }
  CHECK_THROWS_AS(read_matrix_text(badheader), std::runtime_error);

  std::filesystem::remove(trunc);
  std::filesystem::remove(nonfinite);
  std::filesystem::remove(badheader);
}

TEST_CASE("matrix helpers: axpy, linear_comb, scaled") {
  const Matrix x = Matrix::from_rows({{1.0, -2.0}});
  const Matrix y = Matrix::from_rows({{10.0, 10.0}});
  Matrix acc = y;
  axpy(2.0, x, acc);
  CHECK(acc(0, 0) == 12.0);
  CHECK(acc(0, 1) == 6.0);

  const Matrix lc = linear_comb(3.0, x, -1.0, y);
  CHECK(lc(0, 0) == -7.0);
  CHECK(lc(0, 1) == -16.0);

  Matrix wrong(2, 2, 0.0);
  CHECK_THROWS_AS(axpy(1.0, x, wrong), std::invalid_argument);
  CHECK_THROWS_AS(linear_comb(1.0, x, 1.0, wrong), std::invalid_argument);
}

TEST_CASE("matrix construction guards") {
  CHECK_THROWS_AS(Matrix(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(Matrix(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(Matrix::from_rows({{1.0}, {1.0, 2.0}}), std::invalid_argument);
  Matrix inf(1, 1, 0.0);
  CHECK(inf.all_finite());
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK(!inf.all_finite());
}
