#pragma once

// Solver for XY = I on a set of entries, with X (k x N) and Y (N x k) constrained to
// vanish outside given supports. Shared by the CI and GCI front ends.

#include <cstdint>
#include <optional>
#include <vector>

#include "iforge/ci.hpp"
#include "iforge/field.hpp"

namespace iforge::detail {

struct RectProblem {
  PrimeField field;
  std::size_t k = 0;
  std::size_t N = 0;
  std::vector<bool> xFree;      // k*N, row-major
  std::vector<bool> yFree;      // N*k
  std::vector<bool> equations;  // k*k: (XY)_ij = delta_ij required
};

struct RectOutcome {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<FieldMatrix> x;
  std::optional<FieldMatrix> y;
  std::uint64_t nodes = 0;
};

RectOutcome solve_rect(const RectProblem& problem, std::uint64_t budget);

}  // namespace iforge::detail
