#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iforge/ci.hpp"
#include "iforge/cnf.hpp"
#include "iforge/interleaving.hpp"
#include "iforge/presentation.hpp"
#include "iforge/staircase.hpp"

namespace iforge {

/// A nonnegative rational or infinity.
class Bound {
 public:
  Bound(Rational value);  // NOLINT(google-explicit-constructor)
  static Bound infinity() { return Bound(); }

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  /// Throws std::logic_error when infinite.
  [[nodiscard]] const Rational& value() const;
  [[nodiscard]] std::string to_string() const;

  /// "inf" or a rational.
  static Bound parse(const std::string& text);

 private:
  Bound() = default;
  bool infinite_ = true;
  Rational value_;
};

struct TrivialityParams {
  Bound s;  // kernel
  Bound t;  // cokernel
};

/// ker(f_p) -> ker(f_{p+eps}) vanishes for every p (checked on the critical grid with shift eps).
bool kernel_eps_trivial(const Morphism& f, const Rational& eps);
/// coker(f_p) -> coker(f_{p+eps}) vanishes for every p.
bool cokernel_eps_trivial(const Morphism& f, const Rational& eps);
bool kernel_trivial(const Morphism& f, const Bound& s);
bool cokernel_trivial(const Morphism& f, const Bound& t);

/// Morphism between the sum presentations with summand i sent to sum_j matrix(j, i) * summand j.
/// Throws if the matrix is nonzero where the source summand is not contained in the target one.
Morphism morphism_from_matrix(const StaircaseSum& m, const StaircaseSum& n, const MorphismMatrix& f);

/// Entry (j, i) may be nonzero iff summand i of m lies inside summand j of n.
std::vector<std::vector<bool>> allowed_entries(const StaircaseSum& m, const StaircaseSum& n);

// Staircase-sum versions of the triviality checks: same answers as the presentation path, computed
// with summand-membership submatrices.
bool staircase_kernel_trivial(const StaircaseSum& m, const StaircaseSum& n, const FieldMatrix& f, const Bound& s);
bool staircase_cokernel_trivial(const StaircaseSum& m, const StaircaseSum& n, const FieldMatrix& f, const Bound& t);

struct OneSidedDecision {
  SolveStatus status = SolveStatus::NoSolution;
  std::optional<MorphismMatrix> morphism;
  std::uint64_t nodes = 0;
};

/// Searches column-normalized morphism matrices M -> N for one with s-trivial kernel and t-trivial cokernel.
OneSidedDecision exists_st_trivial_morphism(const StaircaseSum& m, const StaircaseSum& n, const TrivialityParams& params,
                                            std::uint64_t budget = kDefaultBudget);

/// Surjective (resp. injective) morphism search with pointwise rank pruning.
OneSidedDecision exists_surjection(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget = kDefaultBudget);
OneSidedDecision exists_injection(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget = kDefaultBudget);

/// Rank conditions a surjection (or injection) must meet: one (rows, cols) pair per distinct
/// membership pattern over the coordinate grid of all corners.
struct RankCondition {
  std::vector<std::size_t> rows;  // target summands present
  std::vector<std::size_t> cols;  // source summands present
};
std::vector<RankCondition> rank_conditions(const StaircaseSum& m, const StaircaseSum& n);

/// Builds g with (f, g) an eps-interleaving, given f: M -> N^eps injective with 2eps-trivial cokernel.
/// Throws std::invalid_argument if the preconditions fail.
PresentedCertificate complete_interleaving_from_injection(const Morphism& f, const Rational& eps);

/// Morphism dual(N) -> dual(M) given by the transposed matrix, on the reflected interiors.
Morphism dual_morphism(const StaircaseSum& m, const StaircaseSum& n, const MorphismMatrix& f, const Rational& zCut);

struct SurjectionGadget {
  StaircaseSum M;  // A, B, M_1^1, ..., M_1^q, ..., M_n^q
  StaircaseSum N;  // N_1, N_2
  std::uint32_t q = 0;
  std::vector<std::string> summandNames;  // M's summands, then N's
  struct CornerLabel {
    std::string point;  // a, b, g_i^r, g_i^{r,s}, h_j^{y,z,w}
    Point2 at;
    std::vector<std::string> members;
  };
  std::vector<CornerLabel> corners;
};

/// Gadget over GF(q) whose M surjects onto N iff f is satisfiable. Corners sit at (k, -k).
SurjectionGadget sat3_to_surjection(const Cnf3& f, const PrimeField& field);

/// Scales each column of a 2-row surjection so its last nonzero entry is 1.
FieldMatrix surjection_normal_form(const FieldMatrix& f);

/// x_i true iff the column of M_{i+1}^1 has a nonzero first row after normal form.
Assignment surjection_assignment(const Cnf3& f, const FieldMatrix& normalized);

}  // namespace iforge
