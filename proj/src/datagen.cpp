#include "jsr/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jsr/core.hpp"
#include "jsr/linalg.hpp"
#include "jsr/projection.hpp"
#include "jsr/rng.hpp"

namespace jsr {

namespace {

void validate(const InstanceSpec& spec) {
  if (spec.N == 0 || spec.M == 0 || spec.K == 0 || spec.J == 0)
    throw std::invalid_argument("InstanceSpec: N, M, K, J must all be positive");
  if (spec.M >= spec.N)
    throw std::invalid_argument("InstanceSpec: need M < N (got M=" + std::to_string(spec.M) +
                                ", N=" + std::to_string(spec.N) + ")");
  if (spec.K > spec.N)
    throw std::invalid_argument("InstanceSpec: need K <= N (got K=" + std::to_string(spec.K) +
                                ", N=" + std::to_string(spec.N) + ")");
}

}  // namespace

ProblemInstance generate(const InstanceSpec& spec) {
  validate(spec);
  RngStream rng(spec.seed);

  Matrix phi(spec.M, spec.N);
  for (std::size_t i = 0; i < spec.M; ++i) {
    double* row = phi.row(i);
    for (std::size_t j = 0; j < spec.N; ++j) row[j] = rng.normal();
  }
  // Normalize columns to unit Euclidean norm.
  for (std::size_t j = 0; j < spec.N; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < spec.M; ++i) s += phi(i, j) * phi(i, j);
    const double norm = std::sqrt(s);
    if (norm == 0.0)
      throw std::runtime_error("generate: degenerate zero column in measurement matrix");
    for (std::size_t i = 0; i < spec.M; ++i) phi(i, j) /= norm;
  }

  // Partial Fisher-Yates: the first K slots become the support.
  std::vector<std::size_t> perm(spec.N);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < spec.K; ++i) {
    const std::size_t j = i + rng.uniform_index(spec.N - i);
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::size_t> support(perm.begin(), perm.begin() + spec.K);
  std::sort(support.begin(), support.end());

  Matrix s_true(spec.N, spec.J);
  for (std::size_t idx : support) {
    double* row = s_true.row(idx);
    for (std::size_t j = 0; j < spec.J; ++j) row[j] = rng.normal();
  }

  Matrix y = linalg::matmul(phi, s_true);
  return ProblemInstance{spec, std::move(phi), std::move(s_true), std::move(y),
                         std::move(support)};
}

bool uniqueness_bound_holds(const ProblemInstance& inst) {
  const std::size_t spark = spark_estimate(inst.spec.M);
  const std::size_t rank = numeric_rank(inst.Y);
  // K < (spark + rank - 1) / 2, kept in integers.
  return 2 * inst.spec.K < spark + rank - 1;
}

std::string dump_instance(const ProblemInstance& inst, const std::string& dir,
                          const std::string& prefix) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = [&](const char* name) { return (fs::path(dir) / (prefix + name)).string(); };
  write_matrix_text(path("phi.txt"), inst.phi);
  write_matrix_text(path("S_true.txt"), inst.S_true);
  write_matrix_text(path("Y.txt"), inst.Y);

  nlohmann::json j{
      {"N", inst.spec.N}, {"M", inst.spec.M},       {"K", inst.spec.K},
      {"J", inst.spec.J}, {"seed", inst.spec.seed}, {"support", inst.support},
      {"uniqueness_bound_holds", uniqueness_bound_holds(inst)},
  };
  const std::string jpath = path("instance.json");
  std::ofstream out(jpath);
  if (!out) throw std::runtime_error("dump_instance: cannot open " + jpath);
  out << j.dump(2) << "\n";
  return jpath;
}

}  // namespace jsr
