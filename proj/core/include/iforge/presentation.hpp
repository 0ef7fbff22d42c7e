#pragma once

#include <map>
#include <string>
#include <vector>

#include "iforge/field.hpp"
#include "iforge/staircase.hpp"

namespace iforge {

struct Relation {
  Point2 grade;
  std::vector<Element> coeffs;  // one per generator

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Graded matrix representation (G, R, A): the module is Gen_p / Rel_p at every p.
class GradedPresentation {
 public:
  /// Throws std::invalid_argument if a relation has the wrong length or uses an unborn generator.
  GradedPresentation(PrimeField field, std::vector<Point2> generators, std::vector<Relation> relations);

  [[nodiscard]] const PrimeField& field() const { return field_; }
  [[nodiscard]] const std::vector<Point2>& generators() const { return generators_; }
  [[nodiscard]] const std::vector<Relation>& relations() const { return relations_; }
  [[nodiscard]] std::size_t num_generators() const { return generators_.size(); }

  friend bool operator==(const GradedPresentation&, const GradedPresentation&) = default;

 private:
  PrimeField field_;
  std::vector<Point2> generators_;
  std::vector<Relation> relations_;
};

/// M_p with a fixed basis of coset representatives.
struct PointSpace {
  Point2 grade;
  std::vector<std::size_t> born;           // generators with grade <= p
  FieldMatrix relBasis;                    // reduced rows over all generator coordinates
  std::vector<std::size_t> quotientBasis;  // generator indices whose classes form the basis
  /// dim x numGenerators: sends a vector supported on born generators to its class coordinates.
  FieldMatrix coords;

  [[nodiscard]] std::size_t dim() const { return quotientBasis.size(); }
};

PointSpace eval_space(const GradedPresentation& m, const Point2& p);
std::size_t eval_dim(const GradedPresentation& m, const Point2& p);

/// Memoizes eval_space for one presentation. Not thread-safe; keep one per computation.
class SpaceCache {
 public:
  explicit SpaceCache(const GradedPresentation& m) : m_(&m) {}
  const PointSpace& at(const Point2& p);
  [[nodiscard]] const GradedPresentation& presentation() const { return *m_; }

 private:
  const GradedPresentation* m_;
  std::map<Point2, PointSpace> cache_;
};

/// Matrix of M_{p->q} in the quotient bases. Throws if p is not <= q.
FieldMatrix internal_map(const GradedPresentation& m, const Point2& p, const Point2& q);

GradedPresentation direct_sum(const std::vector<GradedPresentation>& ms);
/// Every grade g becomes g - (eps, eps), so the result at p is m at p + (eps, eps).
GradedPresentation shift_presentation(const GradedPresentation& m, const Rational& eps);

struct CriticalGrid {
  std::vector<Point2> points;  // sorted lexicographically
};

/// All (x, y) with x among the grade x-coordinates and y among the y-coordinates, each grade also
/// taken at grade - (s, s) for every s in shifts. The product is closed under join.
CriticalGrid critical_grid(const std::vector<const GradedPresentation*>& ms, const std::vector<Rational>& shifts);

/// A morphism stored by lifts: column g is a target-generator vector representing the image of
/// source generator g, supported on target generators born at the grade of g.
class Morphism {
 public:
  /// Throws std::invalid_argument unless the lift is supported correctly and respects every relation.
  Morphism(GradedPresentation source, GradedPresentation target, FieldMatrix lift);

  [[nodiscard]] const GradedPresentation& source() const { return source_; }
  [[nodiscard]] const GradedPresentation& target() const { return target_; }
  [[nodiscard]] const FieldMatrix& lift() const { return lift_; }

 private:
  GradedPresentation source_;
  GradedPresentation target_;
  FieldMatrix lift_;
};

/// True if `lift` defines a morphism source -> target.
bool is_morphism(const GradedPresentation& source, const GradedPresentation& target, const FieldMatrix& lift);

/// dim target_p x dim source_p matrix of f_p in the quotient bases.
FieldMatrix evaluate(const Morphism& f, const Point2& p);
FieldMatrix evaluate(const Morphism& f, const Point2& p, SpaceCache& sourceCache, SpaceCache& targetCache);

/// Basis of Hom(m, n).
std::vector<Morphism> hom_space(const GradedPresentation& m, const GradedPresentation& n);

/// Linear combination of morphisms sharing source and target.
Morphism combine(const std::vector<Morphism>& basis, const std::vector<Element>& coeffs);

/// True if both morphisms agree as maps (compared on source generators).
bool same_morphism(const Morphism& a, const Morphism& b);

Morphism identity_morphism(const GradedPresentation& m);

// {"p":..,"generators":[[x,y],...],"relations":[{"grade":[x,y],"coeffs":[...]},...]}
std::string presentation_to_json(const GradedPresentation& m);
GradedPresentation presentation_from_json(const std::string& text);

}  // namespace iforge
