#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iforge {

struct Literal {
  std::uint32_t var = 0;  // 0-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause3 = std::array<Literal, 3>;

/// A 3CNF formula: every clause has exactly three literals over distinct variables.
struct Cnf3 {
  std::uint32_t numVars = 0;
  std::vector<Clause3> clauses;
  std::vector<std::string> comments;  // kept from parsing, never emitted

  /// Throws std::invalid_argument if a clause is out of range or repeats a variable.
  void validate() const;
};

using Assignment = std::vector<bool>;

/// DIMACS with every clause of width exactly 3.
Cnf3 parse_dimacs(std::string_view text);
std::string emit_dimacs(const Cnf3& f);

bool eval_assignment(const Cnf3& f, const Assignment& a);

/// Exhaustive search; numVars must be at most kBruteForceMaxVars.
inline constexpr std::uint32_t kBruteForceMaxVars = 25;
std::optional<Assignment> brute_force_sat(const Cnf3& f);

/// Clauses of arbitrary width; literals in DIMACS convention (nonzero, sign = polarity, 1-based).
struct Cnf {
  std::uint32_t numVars = 0;
  std::vector<std::vector<std::int32_t>> clauses;

  std::uint32_t new_var() { return ++numVars; }
  void add(std::vector<std::int32_t> clause) { clauses.push_back(std::move(clause)); }
};

std::string emit_dimacs(const Cnf& f);
Cnf parse_dimacs_general(std::string_view text);

/// Values indexed 1..numVars (index 0 unused).
using Model = std::vector<bool>;

/// Small DPLL with unit propagation. Returns a model, or std::nullopt when unsatisfiable.
std::optional<Model> dpll_solve(const Cnf& f);

/// Counts models after projecting onto `projection` (1-based vars) by adding blocking clauses.
/// Stops counting at `limit`.
std::size_t count_projected_models(Cnf f, const std::vector<std::uint32_t>& projection, std::size_t limit);

}  // namespace iforge
