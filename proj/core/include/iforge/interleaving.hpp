#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "iforge/ci.hpp"
#include "iforge/field.hpp"
#include "iforge/presentation.hpp"
#include "iforge/staircase.hpp"

namespace iforge {

/// Morphism between staircase sums: rows index target summands, columns source summands.
struct MorphismMatrix {
  FieldMatrix matrix;
};

/// Zero patterns at eps: P = {(i,j) : d_s(S_i, T_j) > eps}, Q = {(j,i) : d_s(T_j, S_i) > eps}, 1-based.
/// Throws if the summand counts differ.
std::pair<std::vector<Cell>, std::vector<Cell>> pattern_at(const StaircaseSum& m, const StaircaseSum& n,
                                                           const Rational& eps);

/// d_s(S_i, T_j) as a rows = i, cols = j table.
std::vector<std::vector<Rational>> distance_matrix(const StaircaseSum& m, const StaircaseSum& n);

struct StaircaseCertificate {
  Rational eps;
  MorphismMatrix f;  // M -> N^eps
  MorphismMatrix g;  // N -> M^eps
};

struct StaircaseDecision {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<StaircaseCertificate> certificate;
  std::uint64_t nodes = 0;
};

StaircaseDecision decide_interleaving_staircase(const StaircaseSum& m, const StaircaseSum& n, const Rational& eps,
                                                std::uint64_t budget = kDefaultBudget);

/// Re-checks a certificate: mutually inverse and zero wherever the pattern forbids.
bool verify_staircase_certificate(const StaircaseSum& m, const StaircaseSum& n, const StaircaseCertificate& c);

/// {0} together with every pairwise d_s value in both directions, ascending.
std::vector<Rational> candidate_eps(const StaircaseSum& m, const StaircaseSum& n);

struct DistanceResult {
  SolveStatus status = SolveStatus::NoSolution;  // Solved once a feasible candidate is found
  Rational distance;
  std::optional<StaircaseCertificate> certificate;
};

/// Smallest feasible candidate eps. Candidates may be checked on worker threads
/// (INTERLEAVE_FORGE_THREADS caps them); the answer is the same either way.
DistanceResult interleaving_distance_staircase(const StaircaseSum& m, const StaircaseSum& n,
                                               std::uint64_t budget = kDefaultBudget);

/// Staircase sums whose distance is 1 if the instance is solvable and 3 otherwise.
std::pair<StaircaseSum, StaircaseSum> ci_to_modules(const CiInstance& inst);

struct PresentedCertificate {
  Rational eps;
  Morphism f;  // M -> N^eps
  Morphism g;  // N -> M^eps
};

struct PresentedDecision {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<PresentedCertificate> certificate;
  std::uint64_t nodes = 0;
};

/// Enumerates f over Hom(M, N^eps); for each f the conditions on g are linear and solved directly.
PresentedDecision decide_interleaving_presented(const GradedPresentation& m, const GradedPresentation& n,
                                                const Rational& eps, std::uint64_t budget = kDefaultBudget);

/// g^eps . f = Sh_M(2 eps) and f^eps . g = Sh_N(2 eps), compared on generators.
bool verify_presented_certificate(const GradedPresentation& m, const GradedPresentation& n,
                                  const PresentedCertificate& c);

/// x used by indecomposable_wrap: one more than the largest corner coordinate.
Rational wrap_anchor(const std::vector<const StaircaseSum*>& sums);

/// The module that agrees with the sum below the diagonal block at x + 7 and collapses to a chain of
/// one-dimensional rectangles there. When x is not given, wrap_anchor({&sum}) is used.
GradedPresentation indecomposable_wrap(const StaircaseSum& sum, std::optional<Rational> x = std::nullopt);

/// s_i = x + 7 + i / (n + 1).
Rational wrap_coordinate(const Rational& x, std::size_t n, std::size_t i);

}  // namespace iforge
