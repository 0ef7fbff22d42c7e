#pragma once

// Test-only brute-force references. Deliberately naive: they share no search code with the library.

#include <cstdint>
#include <optional>
#include <random>

#include "iforge/ci.hpp"
#include "iforge/cnf.hpp"
#include "iforge/field.hpp"
#include "iforge/staircase.hpp"

namespace iforge::testing {

using Rng = std::mt19937_64;

FieldMatrix random_matrix(Rng& rng, const PrimeField& f, std::size_t rows, std::size_t cols);
FieldMatrix random_invertible(Rng& rng, const PrimeField& f, std::size_t n);

/// Random 3CNF with distinct variables per clause.
Cnf3 random_cnf3(Rng& rng, std::uint32_t numVars, std::uint32_t numClauses);

/// Tries every assignment of the starred entries of A and B. Gives up (throws) past `limit` candidates.
std::optional<CiSolution> brute_force_gci(const GciInstance& inst, std::uint64_t limit = 1u << 22);

/// Tries every A respecting P and checks whether its inverse respects Q.
std::optional<CiSolution> brute_force_ci(const CiInstance& inst, std::uint64_t limit = 1u << 22);

/// Satisfiability by plain enumeration through eval_assignment.
bool satisfiable_by_enumeration(const Cnf3& f);

/// 1..maxCorners random integer points in [lo, hi]^2, normalized.
Staircase random_staircase(Rng& rng, int maxCorners, int lo, int hi);
StaircaseSum random_sum(Rng& rng, const PrimeField& f, int maxSummands, int maxCorners, int lo, int hi);

/// Pair whose target summands are mostly shifts of the source summands, so injections occur often.
std::pair<StaircaseSum, StaircaseSum> random_nested_pair(Rng& rng, const PrimeField& f);

/// 0/1 matrix N x M, nonzero only where the source summand lies inside the target summand.
FieldMatrix random_allowed_matrix(Rng& rng, const StaircaseSum& m, const StaircaseSum& n);

/// Least integer eps with every lattice point of s in shift(t, eps), found by scanning a box.
/// Only meaningful for integer corners.
Rational shift_distance_by_membership(const Staircase& s, const Staircase& t);

/// Every matrix M -> N whose nonzero entries sit where the source summand lies inside the target
/// summand, checked for full row rank at every point of the corner-coordinate grid.
/// Throws past `limit` candidates.
bool surjection_by_enumeration(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t limit = 1u << 16);

}  // namespace iforge::testing
