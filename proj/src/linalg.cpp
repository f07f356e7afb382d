#include "jsr/linalg.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace jsr::linalg {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void check_mul(const Matrix& a, const Matrix& b, std::size_t inner_a, std::size_t inner_b,
               const char* what) {
  if (inner_a != inner_b)
    throw std::invalid_argument(std::string(what) + ": inner dimensions differ (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
}

}  // namespace

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  const std::size_t m = a.rows(), n = a.cols();
#pragma omp parallel for schedule(static) if (m * n > 1u << 16)
  for (std::size_t j = 0; j < n; ++j) {
    double* tj = t.row(j);
    for (std::size_t i = 0; i < m; ++i) tj[i] = a(i, j);
  }
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_mul(a, b, a.cols(), b.rows(), "matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
#pragma omp parallel for schedule(static) if (m * k * n > 1u << 14)
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t l = 0; l < k; ++l) {
      const double v = ai[l];
      const double* bl = b.row(l);
#pragma omp simd
      for (std::size_t j = 0; j < n; ++j) ci[j] += v * bl[j];
    }
  }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  check_mul(a, b, a.rows(), b.rows(), "matmul_at_b");
  const std::size_t m = a.rows(), n = a.cols(), p = b.cols();
  Matrix c(n, p);
#pragma omp parallel for schedule(static) if (m * n * p > 1u << 14)
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.row(i);
    for (std::size_t l = 0; l < m; ++l) {
      const double v = a(l, i);
      const double* bl = b.row(l);
#pragma omp simd
      for (std::size_t j = 0; j < p; ++j) ci[j] += v * bl[j];
    }
  }
  return c;
}

Matrix column_gram(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix g(n, n);
  // Upper triangle first; row i costs ~(n - i) * m, so dynamic chunks balance
  // the load without touching the per-element accumulation order.
#pragma omp parallel for schedule(dynamic, 8) if (n >= 64)
  for (std::size_t i = 0; i < n; ++i) {
    double* gi = g.row(i);
    for (std::size_t l = 0; l < m; ++l) {
      const double v = a(l, i);
      const double* al = a.row(l);
#pragma omp simd
      for (std::size_t j = i; j < n; ++j) gi[j] += v * al[j];
    }
  }
#pragma omp parallel for schedule(static) if (n >= 64)
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix row_gram(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix g(m, m);
#pragma omp parallel for schedule(dynamic, 8) if (m >= 64)
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = a.row(i);
    double* gi = g.row(i);
    for (std::size_t j = i; j < m; ++j) gi[j] = dot(ai, a.row(j), n);
  }
#pragma omp parallel for schedule(static) if (m >= 64)
  for (std::size_t i = 1; i < m; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

void add_diagonal(Matrix& a, double value) {
  if (a.rows() != a.cols()) throw std::invalid_argument("add_diagonal: matrix not square");
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += value;
}

// Blocked right-looking Cholesky. The panel solve and the trailing update
// parallelize over rows; each entry is still one serial dot product.
void cholesky_factor(Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky_factor: matrix not square");
  const std::size_t n = a.rows();
  constexpr std::size_t nb = 48;
  for (std::size_t k = 0; k < n; k += nb) {
    const std::size_t kb = std::min(nb, n - k);
    // Factor the diagonal block (unblocked; trailing updates from earlier
    // panels have already been applied).
    for (std::size_t j = k; j < k + kb; ++j) {
      const double* rowj = a.row(j);
      const double d = a(j, j) - dot(rowj + k, rowj + k, j - k);
      if (!(d > 0.0) || !std::isfinite(d))
        throw std::runtime_error("cholesky_factor: non-positive pivot at index " +
                                 std::to_string(j));
      const double djj = std::sqrt(d);
      a(j, j) = djj;
      for (std::size_t i = j + 1; i < k + kb; ++i) {
        const double* rowi = a.row(i);
        a(i, j) = (a(i, j) - dot(rowi + k, rowj + k, j - k)) / djj;
      }
    }
    if (k + kb == n) break;
    // Panel solve below the block.
#pragma omp parallel for schedule(static) if (n - k - kb >= 64)
    for (std::size_t i = k + kb; i < n; ++i) {
      double* rowi = a.row(i);
      for (std::size_t j = k; j < k + kb; ++j) {
        const double* rowj = a.row(j);
        rowi[j] = (rowi[j] - dot(rowi + k, rowj + k, j - k)) / rowj[j];
      }
    }
    // Trailing update (lower triangle only).
#pragma omp parallel for schedule(dynamic, 8) if (n - k - kb >= 64)
    for (std::size_t i = k + kb; i < n; ++i) {
      double* rowi = a.row(i);
      for (std::size_t j = k + kb; j <= i; ++j)
        rowi[j] -= dot(rowi + k, a.row(j) + k, kb);
    }
  }
}

namespace {

// Both substitutions run each column's recursion serially; threads own
// disjoint column ranges, so the arithmetic per column never depends on the
// thread count.
template <bool Forward>
void subst_impl(const Matrix& t, Matrix& x) {
  if (t.rows() != t.cols()) throw std::invalid_argument("subst: triangular factor not square");
  if (x.rows() != t.rows())
    throw std::invalid_argument("subst: rhs row count does not match factor");
  const std::size_t n = t.rows(), w = x.cols();
#pragma omp parallel if (w >= 8)
  {
    const std::size_t nt = static_cast<std::size_t>(omp_get_num_threads());
    const std::size_t tid = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t c0 = w * tid / nt;
    const std::size_t c1 = w * (tid + 1) / nt;
    if (c1 > c0) {
      if constexpr (Forward) {
        for (std::size_t i = 0; i < n; ++i) {
          double* xi = x.row(i);
          const double* ti = t.row(i);
          for (std::size_t k = 0; k < i; ++k) {
            const double l = ti[k];
            const double* xk = x.row(k);
#pragma omp simd
            for (std::size_t c = c0; c < c1; ++c) xi[c] -= l * xk[c];
          }
          const double d = ti[i];
#pragma omp simd
          for (std::size_t c = c0; c < c1; ++c) xi[c] /= d;
        }
      } else {
        for (std::size_t ii = n; ii-- > 0;) {
          double* xi = x.row(ii);
          const double* ti = t.row(ii);
          for (std::size_t k = ii + 1; k < n; ++k) {
            const double u = ti[k];
            const double* xk = x.row(k);
#pragma omp simd
            for (std::size_t c = c0; c < c1; ++c) xi[c] -= u * xk[c];
          }
          const double d = ti[ii];
#pragma omp simd
          for (std::size_t c = c0; c < c1; ++c) xi[c] /= d;
        }
      }
    }
  }
}

}  // namespace

void forward_subst(const Matrix& lower, Matrix& x) { subst_impl<true>(lower, x); }

void backward_subst(const Matrix& upper, Matrix& x) { subst_impl<false>(upper, x); }

// One-sided Jacobi: orthogonalize column pairs of the thinner orientation.
// Works on a transposed copy so each column is a contiguous row.
std::vector<double> singular_values(const Matrix& a) {
  const bool flip = a.cols() > a.rows();
  Matrix w = flip ? a : transpose(a);  // rows of w = columns of the working matrix
  const std::size_t nc = w.rows();     // column count of the working matrix
  const std::size_t len = w.cols();

  constexpr int max_sweeps = 60;
  const double tol = 1.0e-14;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < nc; ++p) {
      for (std::size_t q = p + 1; q < nc; ++q) {
        double* cp = w.row(p);
        double* cq = w.row(q);
        const double app = dot(cp, cp, len);
        const double aqq = dot(cq, cq, len);
        const double apq = dot(cp, cq, len);
        if (app == 0.0 || aqq == 0.0) continue;
        if (std::abs(apq) <= tol * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < len; ++i) {
          const double vp = cp[i], vq = cq[i];
          cp[i] = c * vp - s * vq;
          cq[i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(nc);
  for (std::size_t p = 0; p < nc; ++p) sv[p] = std::sqrt(dot(w.row(p), w.row(p), len));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

namespace ref {

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_mul(a, b, a.cols(), b.rows(), "ref::matmul");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
  check_mul(a, b, a.rows(), b.rows(), "ref::matmul_at_b");
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.rows(); ++l) s += a(l, i) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

Matrix column_gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.rows(); ++l) s += a(l, i) * a(l, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

Matrix row_gram(const Matrix& a) {
  Matrix g(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.rows(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * a(j, l);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

void cholesky_factor(Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("ref::cholesky_factor: matrix not square");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw std::runtime_error("ref::cholesky_factor: non-positive pivot at index " +
                               std::to_string(j));
    const double djj = std::sqrt(d);
    a(j, j) = djj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / djj;
    }
  }
}

void forward_subst(const Matrix& lower, Matrix& x) {
  if (lower.rows() != lower.cols() || x.rows() != lower.rows())
    throw std::invalid_argument("ref::forward_subst: shape mismatch");
  const std::size_t n = lower.rows(), w = x.cols();
  for (std::size_t c = 0; c < w; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      double s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x(k, c);
      x(i, c) = s / lower(i, i);
    }
}

void backward_subst(const Matrix& upper, Matrix& x) {
  if (upper.rows() != upper.cols() || x.rows() != upper.rows())
    throw std::invalid_argument("ref::backward_subst: shape mismatch");
  const std::size_t n = upper.rows(), w = x.cols();
  for (std::size_t c = 0; c < w; ++c)
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x(ii, c);
      for (std::size_t k = ii + 1; k < n; ++k) s -= upper(ii, k) * x(k, c);
      x(ii, c) = s / upper(ii, ii);
    }
}

}  // namespace ref

}  // namespace jsr::linalg
