#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jsr/matrix.hpp"

namespace jsr {

struct InstanceSpec {
  std::size_t N = 0;  // signal dimension (rows of S)
  std::size_t M = 0;  // measurements (rows of Phi), M < N
  std::size_t K = 0;  // occupied rows of the ground truth, K <= N
  std::size_t J = 0;  // snapshots (columns of S and Y)
  std::uint64_t seed = 0;
};

struct ProblemInstance {
  InstanceSpec spec;
  Matrix phi;                        // M x N, unit-norm columns
  Matrix S_true;                     // N x J, exactly K nonzero rows
  Matrix Y;                          // phi * S_true (noiseless)
  std::vector<std::size_t> support;  // sorted row indices of S_true, size K
};

// Deterministic instance construction from the seed. One RngStream drives
// everything, consumed in a fixed order: Phi entries row-major, then the
// support draw (partial Fisher-Yates over [0, N)), then the occupied rows of
// S_true in ascending row order, each row left to right.
ProblemInstance generate(const InstanceSpec& spec);

// Identifiability check recorded by the harness: K < (spark + rank(Y) - 1)/2.
bool uniqueness_bound_holds(const ProblemInstance& inst);

// Writes <prefix>phi.txt, <prefix>S_true.txt, <prefix>Y.txt and
// <prefix>instance.json under dir. Returns the json path.
std::string dump_instance(const ProblemInstance& inst, const std::string& dir,
                          const std::string& prefix = "");

}  // namespace jsr
