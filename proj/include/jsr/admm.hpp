#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jsr/matrix.hpp"

namespace jsr {

// How the regularized normal matrix (2 Phi^T Phi + rho I) is applied.
//   Plain: factor the N x N matrix once, two triangular solves per iteration.
//   Smw:   matrix-inversion-lemma form; factors the M x M matrix
//          I + (2/rho) Phi Phi^T instead, cheaper whenever M << N.
enum class Backend { Plain, Smw };

enum class Termination { Converged, MaxIter };

struct SolverConfig {
  double rho = 1.0;
  std::size_t s = 0;  // row-sparsity budget, required (1 <= s <= N)
  std::size_t max_iter = 1000;
  double eps_primal = 1e-6;  // threshold on ||B - S||_F
  double eps_change = 1e-6;  // threshold on ||S_next - S||_F
  double eps_dual = 1e-6;    // threshold on ||L||_F
  Backend backend = Backend::Plain;
  std::uint64_t seed = 0;    // seeds the Gaussian initial iterate
  bool criterion_enabled = true;
};

struct ResidualTriple {
  double primal_gap;       // ||B - S||_F
  double iterate_change;   // ||S_next - S||_F
  double multiplier_norm;  // ||L||_F
};

struct SolverResult {
  Matrix S_hat;    // recovered signal (the constrained iterate B)
  Matrix S_final;  // last least-squares iterate, kept as a diagnostic
  std::size_t iterations = 0;
  Termination termination = Termination::MaxIter;
  std::vector<ResidualTriple> residual_history;  // one triple per iteration
  double kkt_stationarity = 0.0;  // ||2 Phi^T (Phi S - Y) - L||_F at exit
  double wall_time_seconds = 0.0;
};

// Cached solve handle for (2 Phi^T Phi + rho I) X = rhs. Both backends
// produce the same solution up to roundoff; Smw keeps a copy of Phi.
class FactorizedNormalMatrix {
 public:
  static FactorizedNormalMatrix factorize(const Matrix& phi, double rho, Backend backend);

  Matrix solve(const Matrix& rhs) const;

  Backend backend() const { return backend_; }
  double rho() const { return rho_; }
  std::size_t dimension() const { return n_; }

 private:
  FactorizedNormalMatrix() = default;

  Backend backend_ = Backend::Plain;
  double rho_ = 0.0;
  std::size_t n_ = 0;  // columns of Phi
  Matrix lower_;       // Cholesky factor (N x N for Plain, M x M for Smw)
  Matrix upper_;       // its transpose, stored for contiguous back-substitution
  Matrix phi_;         // Smw only
};

namespace admm {

// B-step: project S - L/rho onto the set of matrices with at most s
// nonzero rows (keep the s largest row norms).
Matrix threshold_update(const Matrix& s_iter, const Matrix& l_iter, double rho, std::size_t s);

// S-step: solve (2 Phi^T Phi + rho I) S = 2 Phi^T Y + rho B + L.
Matrix least_squares_update(const FactorizedNormalMatrix& fact, const Matrix& phi,
                            const Matrix& y, const Matrix& b_iter, const Matrix& l_iter,
                            double rho);

// L-step: L + rho (B - S).
Matrix multiplier_update(const Matrix& l_iter, const Matrix& b_iter, const Matrix& s_iter,
                         double rho);

struct ConvergenceCheck {
  bool converged = false;
  ResidualTriple triple{};
};

// Evaluates the stopping triple; converged means all three fall below their
// thresholds (the caller decides whether early stopping is armed).
ConvergenceCheck check_convergence(const Matrix& prev_s, const Matrix& b_iter,
                                   const Matrix& s_iter, const Matrix& l_iter,
                                   const SolverConfig& cfg);

// ||2 Phi^T (Phi S - Y) - L||_F, the stationarity defect of the smooth block.
double kkt_stationarity(const Matrix& phi, const Matrix& y, const Matrix& s_iter,
                        const Matrix& l_iter);

// Full row-sparse recovery loop: Gaussian S0 from cfg.seed, L0 = 0, then
// B/S/L sweeps until the triple converges (if armed) or max_iter.
// Throws std::runtime_error naming the iteration if an iterate goes
// non-finite.
SolverResult solve(const Matrix& phi, const Matrix& y, const SolverConfig& cfg);

}  // namespace admm

}  // namespace jsr
