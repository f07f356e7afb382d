#include "jsr/admm.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "jsr/core.hpp"
#include "jsr/linalg.hpp"
#include "jsr/projection.hpp"
#include "jsr/rng.hpp"

namespace jsr {

namespace {

void validate_config(const SolverConfig& cfg, std::size_t n) {
  if (!(cfg.rho > 0.0)) throw std::invalid_argument("SolverConfig: rho must be positive");
  if (cfg.s == 0 || cfg.s > n)
    throw std::invalid_argument("SolverConfig: sparsity budget s must be in [1, N] (got s=" +
                                std::to_string(cfg.s) + ", N=" + std::to_string(n) + ")");
  if (cfg.max_iter == 0) throw std::invalid_argument("SolverConfig: max_iter must be positive");
  if (!(cfg.eps_primal > 0.0) || !(cfg.eps_change > 0.0) || !(cfg.eps_dual > 0.0))
    throw std::invalid_argument("SolverConfig: convergence thresholds must be positive");
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix m(rows, cols);
  double* d = m.data();
  for (std::size_t i = 0; i < rows * cols; ++i) d[i] = rng.normal();
  return m;
}

}  // namespace

FactorizedNormalMatrix FactorizedNormalMatrix::factorize(const Matrix& phi, double rho,
                                                         Backend backend) {
  if (!(rho > 0.0))
    throw std::invalid_argument("FactorizedNormalMatrix: rho must be positive");
  if (!phi.all_finite())
    throw std::runtime_error("FactorizedNormalMatrix: non-finite entries in Phi");

  FactorizedNormalMatrix f;
  f.backend_ = backend;
  f.rho_ = rho;
  f.n_ = phi.cols();
  if (backend == Backend::Plain) {
    Matrix g = linalg::column_gram(phi);
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] *= 2.0;
    linalg::add_diagonal(g, rho);
    linalg::cholesky_factor(g);
    f.upper_ = linalg::transpose(g);  // stale upper triangle of g is ignored below
    f.lower_ = std::move(g);
  } else {
    Matrix w = linalg::row_gram(phi);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] *= 2.0 / rho;
    linalg::add_diagonal(w, 1.0);
    linalg::cholesky_factor(w);
    f.upper_ = linalg::transpose(w);
    f.lower_ = std::move(w);
    f.phi_ = phi;
  }
  return f;
}

Matrix FactorizedNormalMatrix::solve(const Matrix& rhs) const {
  if (rhs.rows() != n_)
    throw std::invalid_argument("FactorizedNormalMatrix::solve: rhs has " +
                                std::to_string(rhs.rows()) + " rows, expected " +
                                std::to_string(n_));
  if (backend_ == Backend::Plain) {
    Matrix x = rhs;
    linalg::forward_subst(lower_, x);
    linalg::backward_subst(upper_, x);
    return x;
  }
  // Inversion-lemma form:
  //   (2 Phi^T Phi + rho I)^-1 = I/rho - (2/rho^2) Phi^T (I + 2 Phi Phi^T / rho)^-1 Phi
  Matrix t = linalg::matmul(phi_, rhs);
  linalg::forward_subst(lower_, t);
  linalg::backward_subst(upper_, t);
  Matrix u = linalg::matmul_at_b(phi_, t);
  return linear_comb(1.0 / rho_, rhs, -2.0 / (rho_ * rho_), u);
}

namespace admm {

Matrix threshold_update(const Matrix& s_iter, const Matrix& l_iter, double rho, std::size_t s) {
  require_same_shape(s_iter, l_iter, "threshold_update");
  if (!(rho > 0.0)) throw std::invalid_argument("threshold_update: rho must be positive");
  return project_row_sparse(linear_comb(1.0, s_iter, -1.0 / rho, l_iter), s);
}

Matrix least_squares_update(const FactorizedNormalMatrix& fact, const Matrix& phi,
                            const Matrix& y, const Matrix& b_iter, const Matrix& l_iter,
                            double rho) {
  Matrix rhs = linalg::matmul_at_b(phi, y);
  double* rd = rhs.data();
  const double* bd = b_iter.data();
  const double* ld = l_iter.data();
  if (!rhs.same_shape(b_iter) || !rhs.same_shape(l_iter))
    throw std::invalid_argument("least_squares_update: B/L shape does not match Phi^T Y");
  for (std::size_t i = 0; i < rhs.size(); ++i) rd[i] = 2.0 * rd[i] + rho * bd[i] + ld[i];
  return fact.solve(rhs);
}

Matrix multiplier_update(const Matrix& l_iter, const Matrix& b_iter, const Matrix& s_iter,
                         double rho) {
  require_same_shape(l_iter, b_iter, "multiplier_update");
  require_same_shape(l_iter, s_iter, "multiplier_update");
  Matrix out(l_iter.rows(), l_iter.cols());
  double* od = out.data();
  const double* ld = l_iter.data();
  const double* bd = b_iter.data();
  const double* sd = s_iter.data();
  for (std::size_t i = 0; i < out.size(); ++i) od[i] = ld[i] + rho * (bd[i] - sd[i]);
  return out;
}

ConvergenceCheck check_convergence(const Matrix& prev_s, const Matrix& b_iter,
                                   const Matrix& s_iter, const Matrix& l_iter,
                                   const SolverConfig& cfg) {
  ConvergenceCheck c;
  c.triple.primal_gap = frobenius_distance(b_iter, s_iter);
  c.triple.iterate_change = frobenius_distance(s_iter, prev_s);
  c.triple.multiplier_norm = frobenius_norm(l_iter);
  c.converged = c.triple.primal_gap < cfg.eps_primal &&
                c.triple.iterate_change < cfg.eps_change &&
                c.triple.multiplier_norm < cfg.eps_dual;
  return c;
}

double kkt_stationarity(const Matrix& phi, const Matrix& y, const Matrix& s_iter,
                        const Matrix& l_iter) {
  Matrix r = linalg::matmul(phi, s_iter);
  axpy(-1.0, y, r);
  Matrix g = linalg::matmul_at_b(phi, r);
  double s = 0.0;
  const double* gd = g.data();
  const double* ld = l_iter.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = 2.0 * gd[i] - ld[i];
    s += d * d;
  }
  return std::sqrt(s);
}

SolverResult solve(const Matrix& phi, const Matrix& y, const SolverConfig& cfg) {
  if (phi.rows() != y.rows())
    throw std::invalid_argument("solve: Phi and Y row counts differ");
  validate_config(cfg, phi.cols());
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t n = phi.cols(), j = y.cols();
  const auto fact = FactorizedNormalMatrix::factorize(phi, cfg.rho, cfg.backend);

  // 2 Phi^T Y is constant across iterations.
  Matrix rhs_base = linalg::matmul_at_b(phi, y);
  for (std::size_t i = 0; i < rhs_base.size(); ++i) rhs_base.data()[i] *= 2.0;

  Matrix s_iter = gaussian_matrix(n, j, cfg.seed);
  Matrix l_iter(n, j, 0.0);
  Matrix b_iter(n, j, 0.0);
  Matrix rhs(n, j, 0.0);

  SolverResult result;
  result.residual_history.reserve(std::min<std::size_t>(cfg.max_iter, 4096));

  std::size_t iter = 0;
  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    b_iter = threshold_update(s_iter, l_iter, cfg.rho, cfg.s);

    {
      double* rd = rhs.data();
      const double* cd = rhs_base.data();
      const double* bd = b_iter.data();
      const double* ld = l_iter.data();
      for (std::size_t i = 0; i < rhs.size(); ++i)
        rd[i] = cd[i] + cfg.rho * bd[i] + ld[i];
    }
    Matrix s_next = fact.solve(rhs);
    l_iter = multiplier_update(l_iter, b_iter, s_next, cfg.rho);

    const auto check = check_convergence(s_iter, b_iter, s_next, l_iter, cfg);
    result.residual_history.push_back(check.triple);
    if (!std::isfinite(check.triple.primal_gap) || !std::isfinite(check.triple.iterate_change) ||
        !std::isfinite(check.triple.multiplier_norm))
      throw std::runtime_error("solve: diverged (non-finite iterate) at iteration " +
                               std::to_string(iter));
    s_iter = std::move(s_next);

    if (cfg.criterion_enabled && check.converged) {
      result.termination = Termination::Converged;
      break;
    }
  }
  result.iterations = std::min(iter, cfg.max_iter);

  result.kkt_stationarity = kkt_stationarity(phi, y, s_iter, l_iter);
  result.S_hat = std::move(b_iter);
  result.S_final = std::move(s_iter);
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace admm

}  // namespace jsr
