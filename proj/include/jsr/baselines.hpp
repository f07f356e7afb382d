#pragma once

#include <cstddef>
#include <cstdint>

#include "jsr/admm.hpp"
#include "jsr/matrix.hpp"

namespace jsr {

// Row-wise group soft threshold: each row v becomes max(0, 1 - tau/||v||) v.
Matrix soft_threshold_rows(const Matrix& x, double tau);

// Simultaneous orthogonal matching pursuit. Greedy support growth by the
// row norms of Phi^T R (ties toward the smaller index), least-squares refit
// on the selected columns, exactly K rounds.
SolverResult somp_solve(const Matrix& phi, const Matrix& y, std::size_t K);

// Simultaneous normalized iterative hard thresholding. Gradient step with
// the adaptive step length ||g_G||^2 / ||Phi g_G||^2 (g restricted to the
// current support), halved until the data misfit does not increase, then
// hard thresholding to the K largest rows. The misfit is non-increasing by
// construction.
SolverResult sniht_solve(const Matrix& phi, const Matrix& y, std::size_t K,
                         std::size_t max_iter = 1000);

struct L21Config {
  double lambda = 1e-6;  // row-sparsity weight
  double rho = 1e-5;     // splitting penalty
  std::size_t max_iter = 1000;
  double eps_primal = 1e-6;
  double eps_change = 1e-6;
  double eps_dual = 1e-6;
  std::uint64_t seed = 0;
  bool criterion_enabled = true;
};

// Convex relaxation of the row-sparse recovery loop: same S/L sweeps as the
// thresholded solver, with the B-step replaced by the group soft threshold
// at tau = lambda/rho.
SolverResult admm_l21_solve(const Matrix& phi, const Matrix& y, const L21Config& cfg);

}  // namespace jsr
