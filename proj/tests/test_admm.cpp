#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "jsr/admm.hpp"
#include "jsr/core.hpp"
#include "jsr/datagen.hpp"
#include "jsr/linalg.hpp"
#include "jsr/projection.hpp"
#include "jsr/rng.hpp"

using namespace jsr;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix x(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) x(i, j) = rng.normal();
  return x;
}

// (2 Phi^T Phi + rho I) X, assembled densely -- the equation the cached
// factorization claims to solve.
Matrix apply_normal_matrix(const Matrix& phi, double rho, const Matrix& x) {
  Matrix a = linalg::column_gram(phi);
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] *= 2.0;
  linalg::add_diagonal(a, rho);
  return linalg::matmul(a, x);
}

}  // namespace

TEST_CASE("threshold step shifts by the scaled multiplier, then projects") {
  const Matrix s = Matrix::from_rows({{3.0, 0.0}, {0.0, 1.0}, {2.0, 2.0}});
  const Matrix l = Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  // S - L/2 has row norms {2, 1, sqrt(8)}; keep the top two rows
  const Matrix b = admm::threshold_update(s, l, 2.0, 2);
  const Matrix expected = Matrix::from_rows({{2.0, 0.0}, {0.0, 0.0}, {2.0, 2.0}});
  CHECK(frobenius_distance(b, expected) == 0.0);

  // agrees with the two standalone pieces on random data
  const Matrix sr = random_matrix(12, 3, 1);
  const Matrix lr = random_matrix(12, 3, 2);
  const Matrix direct = project_row_sparse(linear_comb(1.0, sr, -1.0 / 0.7, lr), 4);
  const Matrix via = admm::threshold_update(sr, lr, 0.7, 4);
  CHECK(std::memcmp(direct.data(), via.data(), direct.size() * sizeof(double)) == 0);

  CHECK_THROWS_AS(admm::threshold_update(sr, lr, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(admm::threshold_update(sr, random_matrix(11, 3, 3), 1.0, 4),
                  std::invalid_argument);
}

TEST_CASE("least-squares step satisfies its normal equations") {
  const Matrix phi = random_matrix(10, 16, 5);
  const Matrix y = random_matrix(10, 3, 6);
  const Matrix b = random_matrix(16, 3, 7);
  const Matrix l = random_matrix(16, 3, 8);
  const double rho = 0.7;

  Matrix rhs = linalg::matmul_at_b(phi, y);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs.data()[i] = 2.0 * rhs.data()[i] + rho * b.data()[i] + l.data()[i];
  const double rhs_norm = frobenius_norm(rhs);

  for (const Backend be : {Backend::Plain, Backend::Smw}) {
    const auto fact = FactorizedNormalMatrix::factorize(phi, rho, be);
    const Matrix s = admm::least_squares_update(fact, phi, y, b, l, rho);
    const Matrix lhs = apply_normal_matrix(phi, rho, s);
    CHECK(frobenius_distance(lhs, rhs) <= 1e-10 * rhs_norm);
  }
}

TEST_CASE("both factorization backends solve the same system") {
  const Matrix phi = random_matrix(20, 50, 9);
  const Matrix rhs = random_matrix(50, 4, 10);
  const auto plain = FactorizedNormalMatrix::factorize(phi, 1.0, Backend::Plain);
  const auto smw = FactorizedNormalMatrix::factorize(phi, 1.0, Backend::Smw);
  CHECK(plain.backend() == Backend::Plain);
  CHECK(smw.backend() == Backend::Smw);
  CHECK(plain.dimension() == 50);
  CHECK(smw.dimension() == 50);
  CHECK(plain.rho() == 1.0);

  const Matrix xp = plain.solve(rhs);
  const Matrix xs = smw.solve(rhs);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < xp.size(); ++i)
    max_diff = std::max(max_diff, std::abs(xp.data()[i] - xs.data()[i]));
  CHECK(max_diff <= 1e-10);

  CHECK_THROWS_AS(plain.solve(random_matrix(49, 4, 11)), std::invalid_argument);
}

TEST_CASE("factorization validates its inputs") {
  const Matrix phi = random_matrix(6, 9, 12);
  CHECK_THROWS_AS(FactorizedNormalMatrix::factorize(phi, 0.0, Backend::Plain),
                  std::invalid_argument);
  CHECK_THROWS_AS(FactorizedNormalMatrix::factorize(phi, -1.0, Backend::Smw),
                  std::invalid_argument);
  Matrix bad = phi;
  bad(2, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(FactorizedNormalMatrix::factorize(bad, 1.0, Backend::Plain),
                  std::runtime_error);
}

TEST_CASE("multiplier step is the scaled constraint residual") {
  const Matrix l = Matrix::from_rows({{1.0}});
  const Matrix b = Matrix::from_rows({{3.0}});
  const Matrix s = Matrix::from_rows({{2.0}});
  const Matrix out = admm::multiplier_update(l, b, s, 0.5);
  CHECK(out(0, 0) == 1.5);

  const Matrix lr = random_matrix(7, 2, 13);
  const Matrix br = random_matrix(7, 2, 14);
  const Matrix sr = random_matrix(7, 2, 15);
  const Matrix o = admm::multiplier_update(lr, br, sr, 0.3);
  for (std::size_t i = 0; i < o.size(); ++i)
    CHECK(o.data()[i] == lr.data()[i] + 0.3 * (br.data()[i] - sr.data()[i]));

  CHECK_THROWS_AS(admm::multiplier_update(lr, br, random_matrix(6, 2, 16), 1.0),
                  std::invalid_argument);
}

TEST_CASE("convergence requires every component strictly below its threshold") {
  SolverConfig cfg;
  cfg.s = 1;  // unused by the check
  const auto make = [](double v) { return Matrix::from_rows({{v}}); };

  // primal_gap = |b - s|, iterate_change = |s - prev|, multiplier_norm = |l|
  auto c = admm::check_convergence(make(0.0), make(1e-7 + 2e-7), make(2e-7), make(3e-7), cfg);
  CHECK(c.triple.primal_gap == doctest::Approx(1e-7).epsilon(1e-9));
  CHECK(c.triple.iterate_change == doctest::Approx(2e-7).epsilon(1e-9));
  CHECK(c.triple.multiplier_norm == doctest::Approx(3e-7).epsilon(1e-9));
  CHECK(c.converged);

  // one component at 1e-5 blocks it
  CHECK(!admm::check_convergence(make(0.0), make(1e-7), make(1e-5), make(1e-7), cfg).converged);
  CHECK(!admm::check_convergence(make(0.0), make(1e-5 + 1e-7), make(1e-7), make(1e-7), cfg)
             .converged);
  CHECK(!admm::check_convergence(make(0.0), make(1e-7), make(1e-7), make(1e-5), cfg).converged);

  // sitting exactly on the threshold is not convergence
  CHECK(!admm::check_convergence(make(0.0), make(1e-7), make(1e-7), make(1e-6), cfg).converged);
}

TEST_CASE("stationarity defect has closed forms in easy cases") {
  const auto inst = generate({12, 8, 2, 2, 21});
  // Phi S = Y exactly at the planted signal, so the defect is just ||L||
  const Matrix l = random_matrix(12, 2, 22);
  CHECK(admm::kkt_stationarity(inst.phi, inst.Y, inst.S_true, l) ==
        doctest::Approx(frobenius_norm(l)).epsilon(1e-12));
  const Matrix l0(12, 2, 0.0);
  CHECK(admm::kkt_stationarity(inst.phi, inst.Y, inst.S_true, l0) <= 1e-13);
}

TEST_CASE("solver matches exhaustive search on a single-row signal") {
  const auto inst = generate({8, 6, 1, 2, 3});
  SolverConfig cfg;
  cfg.s = 1;
  cfg.seed = 11;
  const auto res = admm::solve(inst.phi, inst.Y, cfg);

  CHECK(res.termination == Termination::Converged);
  CHECK(rmse(res.S_hat, inst.S_true) <= 1e-8);
  CHECK(row_support(res.S_hat, 1e-6) == inst.support);

  // exhaustive oracle: best single-column least-squares fit
  Matrix best(8, 2, 0.0);
  double best_resid = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 8; ++i) {
    double nn = 0.0;
    for (std::size_t m = 0; m < 6; ++m) nn += inst.phi(m, i) * inst.phi(m, i);
    Matrix cand(8, 2, 0.0);
    double resid = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      double dot = 0.0;
      for (std::size_t m = 0; m < 6; ++m) dot += inst.phi(m, i) * inst.Y(m, j);
      const double c = dot / nn;
      cand(i, j) = c;
      for (std::size_t m = 0; m < 6; ++m) {
        const double r = inst.Y(m, j) - inst.phi(m, i) * c;
        resid += r * r;
      }
    }
    if (resid < best_resid) {
      best_resid = resid;
      best = cand;
    }
  }
  CHECK(rmse(res.S_hat, best) <= 1e-8);
}

TEST_CASE("solver recovers a planted signal with a loose budget") {
  const auto inst = generate({40, 20, 4, 4, 17});
  SolverConfig cfg;
  cfg.s = 6;  // deliberately above the true row count
  cfg.seed = 29;
  cfg.eps_primal = cfg.eps_change = cfg.eps_dual = 1e-9;  // stop deep for a tight rmse bound
  const auto res = admm::solve(inst.phi, inst.Y, cfg);

  CHECK(res.termination == Termination::Converged);
  CHECK(rmse(res.S_hat, inst.S_true) <= 1e-8);
  CHECK(row_support(res.S_hat, 1e-6) == inst.support);
  CHECK(res.kkt_stationarity <= 1e-4);

  const auto& last = res.residual_history.back();
  CHECK(last.primal_gap < cfg.eps_primal);
  CHECK(last.iterate_change < cfg.eps_change);
  CHECK(last.multiplier_norm < cfg.eps_dual);
}

TEST_CASE("histories and stopping flags stay consistent") {
  const auto inst = generate({30, 15, 3, 2, 5});
  SolverConfig cfg;
  cfg.s = 5;
  cfg.seed = 4;

  const auto converged = admm::solve(inst.phi, inst.Y, cfg);
  CHECK(converged.residual_history.size() == converged.iterations);
  CHECK(converged.iterations < cfg.max_iter);
  CHECK(converged.wall_time_seconds > 0.0);
  CHECK(converged.S_hat.rows() == 30);
  CHECK(converged.S_hat.cols() == 2);
  CHECK(converged.S_final.same_shape(converged.S_hat));

  cfg.criterion_enabled = false;
  cfg.max_iter = 40;
  const auto fixed = admm::solve(inst.phi, inst.Y, cfg);
  CHECK(fixed.termination == Termination::MaxIter);
  CHECK(fixed.iterations == 40);
  CHECK(fixed.residual_history.size() == 40);
}

TEST_CASE("zero measurements drive the signal to zero") {
  const auto inst = generate({20, 10, 2, 3, 9});
  const Matrix y0(10, 3, 0.0);
  SolverConfig cfg;
  cfg.s = 2;
  cfg.seed = 8;
  const auto res = admm::solve(inst.phi, y0, cfg);
  CHECK(res.termination == Termination::Converged);
  CHECK(frobenius_norm(res.S_hat) <= 1e-5);
}

TEST_CASE("solver configuration is validated up front") {
  const auto inst = generate({10, 6, 2, 2, 2});
  SolverConfig cfg;
  cfg.s = 2;

  auto bad = cfg;
  bad.s = 0;
  CHECK_THROWS_AS(admm::solve(inst.phi, inst.Y, bad), std::invalid_argument);
  bad = cfg;
  bad.s = 11;
  CHECK_THROWS_AS(admm::solve(inst.phi, inst.Y, bad), std::invalid_argument);
  bad = cfg;
  bad.rho = 0.0;
  CHECK_THROWS_AS(admm::solve(inst.phi, inst.Y, bad), std::invalid_argument);
  bad = cfg;
  bad.max_iter = 0;
  CHECK_THROWS_AS(admm::solve(inst.phi, inst.Y, bad), std::invalid_argument);
  bad = cfg;
  bad.eps_change = 0.0;
  CHECK_THROWS_AS(admm::solve(inst.phi, inst.Y, bad), std::invalid_argument);

  const Matrix y_short(5, 2, 0.0);
  CHECK_THROWS_AS(admm::solve(inst.phi, y_short, cfg), std::invalid_argument);
}

TEST_CASE("the starting point follows the seed, and reruns are identical") {
  const auto inst = generate({24, 12, 3, 2, 6});
  SolverConfig cfg;
  cfg.s = 5;
  cfg.seed = 100;

  const auto a = admm::solve(inst.phi, inst.Y, cfg);
  const auto b = admm::solve(inst.phi, inst.Y, cfg);
  CHECK(a.iterations == b.iterations);
  CHECK(std::memcmp(a.S_hat.data(), b.S_hat.data(), a.S_hat.size() * sizeof(double)) == 0);

  cfg.seed = 101;
  const auto c = admm::solve(inst.phi, inst.Y, cfg);
  CHECK(a.residual_history.front().iterate_change !=
        c.residual_history.front().iterate_change);
}

TEST_CASE("backends agree on a full solve") {
  const auto inst = generate({60, 20, 5, 3, 31});
  SolverConfig cfg;
  cfg.s = 7;
  cfg.seed = 41;
  cfg.eps_primal = cfg.eps_change = cfg.eps_dual = 1e-9;
  cfg.backend = Backend::Plain;
  const auto plain = admm::solve(inst.phi, inst.Y, cfg);
  cfg.backend = Backend::Smw;
  const auto smw = admm::solve(inst.phi, inst.Y, cfg);
  CHECK(rmse(plain.S_hat, smw.S_hat) <= 1e-9);
  CHECK(rmse(plain.S_hat, inst.S_true) <= 1e-8);
}

TEST_CASE("numeric blowups surface as errors, not results") {
  Matrix phi = random_matrix(4, 6, 50);
  for (std::size_t i = 0; i < phi.size(); ++i) phi.data()[i] *= 1e200;
  const Matrix y = random_matrix(4, 2, 51);
  SolverConfig cfg;
  cfg.s = 2;
  CHECK_THROWS_AS(admm::solve(phi, y, cfg), std::runtime_error);
}
