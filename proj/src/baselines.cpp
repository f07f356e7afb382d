#include "jsr/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jsr/core.hpp"
#include "jsr/linalg.hpp"
#include "jsr/projection.hpp"
#include "jsr/rng.hpp"

namespace jsr {

namespace {

using clock_t_ = std::chrono::steady_clock;

double seconds_since(clock_t_::time_point t0) {
  return std::chrono::duration<double>(clock_t_::now() - t0).count();
}

// Phi(:, rows) * X(rows, :) for a row-sparse X; avoids the full N-sweep.
Matrix matmul_on_rows(const Matrix& phi, const Matrix& x,
                      const std::vector<std::size_t>& rows) {
  Matrix out(phi.rows(), x.cols());
  for (std::size_t r : rows) {
    const double* xr = x.row(r);
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      const double v = phi(i, r);
      double* oi = out.row(i);
      for (std::size_t c = 0; c < x.cols(); ++c) oi[c] += v * xr[c];
    }
  }
  return out;
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix m(rows, cols);
  double* d = m.data();
  for (std::size_t i = 0; i < rows * cols; ++i) d[i] = rng.normal();
  return m;
}

double squared_frobenius(const Matrix& x) {
  double s = 0.0;
  const double* d = x.data();
  for (std::size_t i = 0; i < x.size(); ++i) s += d[i] * d[i];
  return s;
}

}  // namespace

Matrix soft_threshold_rows(const Matrix& x, double tau) {
  if (tau < 0.0) throw std::invalid_argument("soft_threshold_rows: negative threshold");
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += xi[j] * xi[j];
    const double norm = std::sqrt(s);
    if (norm > tau) {
      const double f = 1.0 - tau / norm;
      double* oi = out.row(i);
      for (std::size_t j = 0; j < x.cols(); ++j) oi[j] = f * xi[j];
    }
  }
  return out;
}

SolverResult somp_solve(const Matrix& phi, const Matrix& y, std::size_t K) {
  if (phi.rows() != y.rows())
    throw std::invalid_argument("somp_solve: Phi and Y row counts differ");
  if (K == 0 || K > phi.cols() || K > phi.rows())
    throw std::invalid_argument("somp_solve: K must be in [1, min(M, N)] (got K=" +
                                std::to_string(K) + ")");
  const auto t0 = clock_t_::now();
  const std::size_t m = phi.rows(), n = phi.cols(), j = y.cols();

  Matrix residual = y;
  std::vector<std::size_t> selected;
  std::vector<bool> in_support(n, false);
  Matrix coef;

  SolverResult result;
  result.residual_history.reserve(K);

  for (std::size_t step = 0; step < K; ++step) {
    const Matrix corr = linalg::matmul_at_b(phi, residual);
    const auto scores = row_norms(corr);
    std::size_t best = n;
    double best_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (in_support[i]) continue;
      if (scores[i] > best_score) {  // strict: ties keep the smaller index
        best_score = scores[i];
        best = i;
      }
    }
    selected.push_back(best);
    in_support[best] = true;

    // Least-squares refit on the selected columns.
    const std::size_t t = selected.size();
    Matrix sub(m, t);
    for (std::size_t c = 0; c < t; ++c)
      for (std::size_t r = 0; r < m; ++r) sub(r, c) = phi(r, selected[c]);
    Matrix gram = linalg::column_gram(sub);
    try {
      linalg::cholesky_factor(gram);
    } catch (const std::runtime_error&) {
      throw std::runtime_error("somp_solve: selected columns are rank deficient after " +
                               std::to_string(t) + " selections");
    }
    coef = linalg::matmul_at_b(sub, y);
    linalg::forward_subst(gram, coef);
    Matrix upper = linalg::transpose(gram);
    linalg::backward_subst(upper, coef);

    residual = y;
    axpy(-1.0, linalg::matmul(sub, coef), residual);
    result.residual_history.push_back({frobenius_norm(residual), 0.0, 0.0});
  }

  Matrix s_hat(n, j, 0.0);
  for (std::size_t c = 0; c < selected.size(); ++c)
    std::memcpy(s_hat.row(selected[c]), coef.row(c), j * sizeof(double));

  result.iterations = K;
  result.termination = Termination::Converged;
  Matrix zero_mult(n, j, 0.0);
  result.kkt_stationarity = admm::kkt_stationarity(phi, y, s_hat, zero_mult);
  result.S_hat = s_hat;
  result.S_final = std::move(s_hat);
  result.wall_time_seconds = seconds_since(t0);
  return result;
}

SolverResult sniht_solve(const Matrix& phi, const Matrix& y, std::size_t K,
                         std::size_t max_iter) {
  if (phi.rows() != y.rows())
    throw std::invalid_argument("sniht_solve: Phi and Y row counts differ");
  if (K == 0 || K > phi.cols())
    throw std::invalid_argument("sniht_solve: K must be in [1, N] (got K=" +
                                std::to_string(K) + ")");
  if (max_iter == 0) throw std::invalid_argument("sniht_solve: max_iter must be positive");
  const auto t0 = clock_t_::now();
  const std::size_t n = phi.cols(), j = y.cols();

  Matrix s_iter(n, j, 0.0);
  Matrix residual = y;
  double misfit = squared_frobenius(residual);
  const double y_norm = frobenius_norm(y);

  SolverResult result;
  result.termination = Termination::MaxIter;
  std::size_t iter = 0;

  for (iter = 1; iter <= max_iter; ++iter) {
    const Matrix grad = linalg::matmul_at_b(phi, residual);  // descent direction

    std::vector<std::size_t> support = row_support(s_iter);
    if (support.empty()) support = top_rows_by_value(row_norms(grad), K);

    Matrix grad_on_support(n, j, 0.0);
    for (std::size_t r : support)
      std::memcpy(grad_on_support.row(r), grad.row(r), j * sizeof(double));
    const double num = squared_frobenius(grad_on_support);
    if (num == 0.0) {  // stationary on the active rows
      result.termination = Termination::Converged;
      break;
    }
    const double den = squared_frobenius(matmul_on_rows(phi, grad_on_support, support));
    if (den == 0.0) {
      result.termination = Termination::Converged;
      break;
    }
    double step = num / den;

    // Halve until the misfit stops increasing; stall out if no length works.
    Matrix candidate;
    Matrix cand_residual;
    double cand_misfit = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int attempt = 0; attempt < 64; ++attempt) {
      candidate = project_row_sparse(linear_comb(1.0, s_iter, step, grad), K);
      cand_residual = y;
      axpy(-1.0, matmul_on_rows(phi, candidate, row_support(candidate)), cand_residual);
      cand_misfit = squared_frobenius(cand_residual);
      if (cand_misfit <= misfit + 1e-12 * (1.0 + misfit)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.termination = Termination::Converged;  // no admissible step remains
      break;
    }

    const double change = frobenius_distance(candidate, s_iter);
    s_iter = std::move(candidate);
    residual = std::move(cand_residual);
    misfit = cand_misfit;
    result.residual_history.push_back({std::sqrt(misfit), change, 0.0});

    if (std::sqrt(misfit) <= 1e-13 * std::max(1.0, y_norm) ||
        change <= 1e-10 * std::max(1.0, frobenius_norm(s_iter))) {
      result.termination = Termination::Converged;
      break;
    }
  }
  result.iterations = result.residual_history.size();

  Matrix zero_mult(n, j, 0.0);
  result.kkt_stationarity = admm::kkt_stationarity(phi, y, s_iter, zero_mult);
  result.S_hat = s_iter;
  result.S_final = std::move(s_iter);
  result.wall_time_seconds = seconds_since(t0);
  return result;
}

SolverResult admm_l21_solve(const Matrix& phi, const Matrix& y, const L21Config& cfg) {
  if (phi.rows() != y.rows())
    throw std::invalid_argument("admm_l21_solve: Phi and Y row counts differ");
  if (!(cfg.lambda > 0.0) || !(cfg.rho > 0.0))
    throw std::invalid_argument("admm_l21_solve: lambda and rho must be positive");
  if (cfg.max_iter == 0)
    throw std::invalid_argument("admm_l21_solve: max_iter must be positive");
  const auto t0 = clock_t_::now();
  const std::size_t n = phi.cols(), j = y.cols();
  const double tau = cfg.lambda / cfg.rho;

  const auto fact = FactorizedNormalMatrix::factorize(phi, cfg.rho, Backend::Plain);
  Matrix rhs_base = linalg::matmul_at_b(phi, y);
  for (std::size_t i = 0; i < rhs_base.size(); ++i) rhs_base.data()[i] *= 2.0;

  Matrix s_iter = gaussian_matrix(n, j, cfg.seed);
  Matrix l_iter(n, j, 0.0);
  Matrix b_iter(n, j, 0.0);
  Matrix rhs(n, j, 0.0);

  SolverResult result;
  std::size_t iter = 0;
  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    b_iter = soft_threshold_rows(linear_comb(1.0, s_iter, -1.0 / cfg.rho, l_iter), tau);

    double* rd = rhs.data();
    const double* cd = rhs_base.data();
    const double* bd = b_iter.data();
    const double* ld = l_iter.data();
    for (std::size_t i = 0; i < rhs.size(); ++i) rd[i] = cd[i] + cfg.rho * bd[i] + ld[i];
    Matrix s_next = fact.solve(rhs);
    l_iter = admm::multiplier_update(l_iter, b_iter, s_next, cfg.rho);

    ResidualTriple triple{frobenius_distance(b_iter, s_next),
                          frobenius_distance(s_next, s_iter), frobenius_norm(l_iter)};
    result.residual_history.push_back(triple);
    if (!std::isfinite(triple.primal_gap) || !std::isfinite(triple.iterate_change) ||
        !std::isfinite(triple.multiplier_norm))
      throw std::runtime_error("admm_l21_solve: diverged (non-finite iterate) at iteration " +
                               std::to_string(iter));
    s_iter = std::move(s_next);

    if (cfg.criterion_enabled && triple.primal_gap < cfg.eps_primal &&
        triple.iterate_change < cfg.eps_change && triple.multiplier_norm < cfg.eps_dual) {
      result.termination = Termination::Converged;
      break;
    }
  }
  result.iterations = std::min(iter, cfg.max_iter);

  result.kkt_stationarity = admm::kkt_stationarity(phi, y, s_iter, l_iter);
  result.S_hat = std::move(b_iter);
  result.S_final = std::move(s_iter);
  result.wall_time_seconds = seconds_since(t0);
  return result;
}

}  // namespace jsr
