#include "iforge/staircase.hpp"

#include <algorithm>
#include <stdexcept>

#include "iforge/presentation.hpp"
#include "json_util.hpp"

namespace iforge {

std::string Point2::to_string() const { return "(" + x.to_string() + "," + y.to_string() + ")"; }

Staircase::Staircase(std::vector<Point2> corners) : corners_(std::move(corners)) {
  if (corners_.empty()) throw std::invalid_argument("staircase needs at least one corner");
  for (std::size_t i = 0; i + 1 < corners_.size(); ++i) {
    const auto& a = corners_[i];
    const auto& b = corners_[i + 1];
    if (!(a.x < b.x && a.y > b.y)) {
      throw std::invalid_argument("staircase corners must be incomparable and sorted by x");
    }
  }
}

Staircase normalize(std::vector<Point2> corners) {
  if (corners.empty()) throw std::invalid_argument("normalize: empty corner list");
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  // sweep by x; keep a point only if its y beats every earlier one
  std::vector<Point2> kept;
  for (const auto& p : corners) {
    if (kept.empty() || p.y < kept.back().y) kept.push_back(p);
  }
  return Staircase(std::move(kept));
}

bool contains(const Staircase& s, const Point2& p) {
  return std::any_of(s.corners().begin(), s.corners().end(), [&](const Point2& a) { return leq(a, p); });
}

Staircase shift(const Staircase& s, const Rational& eps) {
  std::vector<Point2> out;
  out.reserve(s.size());
  for (const auto& a : s.corners()) out.push_back(a - eps);
  return Staircase(std::move(out));
}

Rational dshift_distance(const Staircase& s, const Staircase& t) {
  Rational worst(0);
  for (const auto& a : s.corners()) {
    std::optional<Rational> best;
    for (const auto& b : t.corners()) {
      Rational need = std::max(b.x - a.x, b.y - a.y);
      if (!best || need < *best) best = need;
    }
    worst = std::max(worst, *best);
  }
  return worst;
}

StaircaseSum shift(const StaircaseSum& m, const Rational& eps) {
  StaircaseSum out{m.field, {}};
  for (const auto& s : m.summands) out.summands.push_back(shift(s, eps));
  return out;
}

Rational max_abs_coordinate(const std::vector<const StaircaseSum*>& sums) {
  Rational best(0);
  for (const auto* m : sums)
    for (const auto& s : m->summands)
      for (const auto& a : s.corners()) best = std::max({best, abs(a.x), abs(a.y)});
  return best;
}

Rational default_zcut(const std::vector<const StaircaseSum*>& sums) { return max_abs_coordinate(sums) + 8; }

GradedPresentation staircase_presentation(const Staircase& s, const PrimeField& field) {
  const auto& c = s.corners();
  std::vector<Relation> rels;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    std::vector<Element> coeffs(c.size(), 0);
    coeffs[i] = 1;
    coeffs[i + 1] = field.neg(1);
    rels.push_back({join(c[i], c[i + 1]), std::move(coeffs)});
  }
  return GradedPresentation(field, c, std::move(rels));
}

GradedPresentation sum_presentation(const StaircaseSum& m) {
  std::vector<GradedPresentation> parts;
  for (const auto& s : m.summands) parts.push_back(staircase_presentation(s, m.field));
  return direct_sum(parts);
}

GradedPresentation dual_staircase(const Staircase& s, const Rational& zCut, const PrimeField& field) {
  const auto& c = s.corners();
  for (const auto& a : c) {
    if (!(abs(a.x) < zCut && abs(a.y) < zCut)) throw std::invalid_argument("dual_staircase: zCut too small");
  }
  std::vector<Relation> rels;
  auto add = [&](Point2 g) { rels.push_back({g, {1}}); };
  for (const auto& a : c) add(-a);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) add(-join(c[i], c[i + 1]));
  // the two rays closing the region off inside the cut box
  add({-zCut, -c.back().y});
  add({-c.front().x, -zCut});
  return GradedPresentation(field, {Point2{-zCut, -zCut}}, std::move(rels));
}

GradedPresentation dual_sum_presentation(const StaircaseSum& m, const Rational& zCut) {
  std::vector<GradedPresentation> parts;
  for (const auto& s : m.summands) parts.push_back(dual_staircase(s, zCut, m.field));
  return direct_sum(parts);
}

namespace {

using detail::Json;

Json staircase_json(const Staircase& s) {
  Json corners = Json::array();
  for (const auto& a : s.corners()) corners.push_back(detail::point_to_json(a));
  return Json{{"corners", corners}};
}

Staircase staircase_of(const Json& j) {
  if (!j.is_object() || !j.contains("corners") || !j["corners"].is_array()) {
    throw std::invalid_argument("staircase JSON needs a \"corners\" array");
  }
  std::vector<Point2> pts;
  for (const auto& c : j["corners"]) pts.push_back(detail::point_from_json(c));
  return normalize(std::move(pts));
}

}  // namespace

std::string staircase_to_json(const Staircase& s) { return staircase_json(s).dump(); }

Staircase staircase_from_json(const std::string& text) { return staircase_of(detail::parse_json(text)); }

std::string sum_to_json(const StaircaseSum& m) {
  Json summands = Json::array();
  for (const auto& s : m.summands) summands.push_back(staircase_json(s));
  return Json{{"p", m.field.p()}, {"summands", summands}}.dump();
}

StaircaseSum sum_from_json(const std::string& text) {
  auto j = detail::parse_json(text);
  if (!j.is_object() || !j.contains("p") || !j["p"].is_number_unsigned() || !j.contains("summands") ||
      !j["summands"].is_array() || j["summands"].empty()) {
    throw std::invalid_argument("staircase sum JSON needs \"p\" and a nonempty \"summands\" array");
  }
  StaircaseSum m{PrimeField(j["p"].get<std::uint32_t>()), {}};
  for (const auto& s : j["summands"]) m.summands.push_back(staircase_of(s));
  return m;
}

}  // namespace iforge
