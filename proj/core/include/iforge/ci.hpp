#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iforge/cnf.hpp"
#include "iforge/field.hpp"

namespace iforge {

/// (row, col), 1-based.
using Cell = std::pair<std::uint32_t, std::uint32_t>;

/// Find A, B (n x n) with A zero on P, B zero on Q and AB = I.
struct CiInstance {
  std::uint32_t n = 0;
  PrimeField field{2};
  std::vector<Cell> P;
  std::vector<Cell> Q;

  /// Range and duplicate checks; throws std::invalid_argument.
  void validate() const;
};

/// A is n x m, B is m x n; AB must agree with I_n on R only.
struct GciInstance {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  PrimeField field{2};
  std::vector<Cell> P;
  std::vector<Cell> Q;
  std::vector<Cell> R;

  void validate() const;
};

struct CiSolution {
  FieldMatrix A;
  FieldMatrix B;
};

bool verify_ci(const CiInstance& inst, const CiSolution& sol);
bool verify_gci(const GciInstance& inst, const CiSolution& sol);

enum class SolveStatus { Solved, NoSolution, BudgetExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<CiSolution> solution;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

enum class CiAlgorithm {
  /// Preprocessing plus a propagating search over the free entries of A and B.
  Propagate,
  /// Row-major enumeration of A with rank pruning; A^{-1} checked against Q.
  EnumerateA,
};

SolveResult solve_ci(const CiInstance& inst, std::uint64_t budget = kDefaultBudget,
                     CiAlgorithm algorithm = CiAlgorithm::Propagate);
SolveResult solve_gci(const GciInstance& inst, std::uint64_t budget = kDefaultBudget);

/// Where the GCI matrices sit inside the CI matrices produced by gci_to_ci.
struct GciEmbedding {
  std::uint32_t n = 0;
  std::uint32_t m = 0;

  /// A = top n rows / first m columns of the left matrix; B = first m rows / first n columns of the right.
  [[nodiscard]] CiSolution restrict(const CiSolution& ciSolution) const;
};

std::pair<CiInstance, GciEmbedding> gci_to_ci(const GciInstance& inst);

struct SatDecoder {
  std::uint32_t numVars = 0;
  std::uint32_t numClauses = 0;
};

std::pair<GciInstance, SatDecoder> sat3_to_gci(const Cnf3& f, const PrimeField& field);

/// x_i is true iff A(1, 3i+1) != 0. Throws if sol does not verify against sat3_to_gci(f).
Assignment extract_assignment(const Cnf3& f, const GciInstance& inst, const CiSolution& sol);

/// GF(2) encoding of a CI instance as a general CNF.
struct CiCnf {
  Cnf cnf;
  std::uint32_t n = 0;
  std::vector<std::uint32_t> aVar;  // row-major, 1-based CNF variables
  std::vector<std::uint32_t> bVar;

  [[nodiscard]] CiSolution decode(const Model& model) const;
};

CiCnf ci_to_cnf(const CiInstance& inst);

/// JSON instance format: {"kind":"ci"|"gci","n":..,"m":..,"p":..,"P":[[i,j],...],"Q":..,"R":..}
std::string ci_to_json(const CiInstance& inst);
std::string gci_to_json(const GciInstance& inst);
/// Parses either kind; `kind` is set to "ci" or "gci". A CI instance is also returned as GCI with m = n, R = [n]x[n].
struct ParsedInstance {
  std::string kind;
  std::optional<CiInstance> ci;
  std::optional<GciInstance> gci;
};
/// `fieldOverride` (nonzero) replaces the "p" in the file.
ParsedInstance parse_instance_json(const std::string& text, std::uint32_t fieldOverride = 0);

}  // namespace iforge
