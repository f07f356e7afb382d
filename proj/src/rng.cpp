#include "jsr/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jsr {

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, q;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    q = u * u + v * v;
  } while (q >= 1.0 || q == 0.0);
  const double f = std::sqrt(-2.0 * std::log(q) / q);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  // 2^64 mod n; rejecting draws below this keeps the result exactly uniform.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r < threshold);
  return r % n;
}

}  // namespace jsr
