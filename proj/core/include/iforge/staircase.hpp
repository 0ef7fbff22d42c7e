#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iforge/field.hpp"
#include "iforge/rational.hpp"

namespace iforge {

struct Point2 {
  Rational x;
  Rational y;

  friend bool operator==(const Point2&, const Point2&) = default;
  /// Lexicographic (x, then y); a total order for containers, not the product order.
  friend std::strong_ordering operator<=>(const Point2& a, const Point2& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }

  [[nodiscard]] std::string to_string() const;
};

/// Product order: a.x <= b.x and a.y <= b.y.
inline bool leq(const Point2& a, const Point2& b) { return a.x <= b.x && a.y <= b.y; }
inline Point2 join(const Point2& a, const Point2& b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y)};
}
inline Point2 operator+(const Point2& a, const Rational& e) { return {a.x + e, a.y + e}; }
inline Point2 operator-(const Point2& a, const Rational& e) { return {a.x - e, a.y - e}; }
inline Point2 operator-(const Point2& a) { return {-a.x, -a.y}; }

/// Upset generated by pairwise incomparable corners, sorted by increasing x.
class Staircase {
 public:
  /// Use normalize() to build one from arbitrary points.
  explicit Staircase(std::vector<Point2> corners);

  [[nodiscard]] const std::vector<Point2>& corners() const { return corners_; }
  [[nodiscard]] std::size_t size() const { return corners_.size(); }
  friend bool operator==(const Staircase&, const Staircase&) = default;

 private:
  std::vector<Point2> corners_;
};

/// Drops dominated points and sorts. Throws on empty input.
Staircase normalize(std::vector<Point2> corners);

bool contains(const Staircase& s, const Point2& p);

/// Every corner a becomes a - (eps, eps).
Staircase shift(const Staircase& s, const Rational& eps);

/// min{eps >= 0 : s is contained in shift(t, eps)}.
Rational dshift_distance(const Staircase& s, const Staircase& t);

struct StaircaseSum {
  PrimeField field{2};
  std::vector<Staircase> summands;
};

StaircaseSum shift(const StaircaseSum& m, const Rational& eps);

/// Largest |coordinate| over all corners.
Rational max_abs_coordinate(const std::vector<const StaircaseSum*>& sums);

class GradedPresentation;

/// Generators at the corners, relation e_i - e_{i+1} at join(a_i, a_{i+1}).
GradedPresentation staircase_presentation(const Staircase& s, const PrimeField& field);
GradedPresentation sum_presentation(const StaircaseSum& m);

/// Presentation of the reflected interior of s, with the generator at (-zCut, -zCut).
GradedPresentation dual_staircase(const Staircase& s, const Rational& zCut, const PrimeField& field);
GradedPresentation dual_sum_presentation(const StaircaseSum& m, const Rational& zCut);

/// max |coordinate| + 8.
Rational default_zcut(const std::vector<const StaircaseSum*>& sums);

// JSON: {"corners":[["x","y"],...]} and {"p":..,"summands":[...]}; rationals as "num/den" strings or integers.
std::string staircase_to_json(const Staircase& s);
Staircase staircase_from_json(const std::string& text);
std::string sum_to_json(const StaircaseSum& m);
StaircaseSum sum_from_json(const std::string& text);

}  // namespace iforge
