#pragma once

#include <stdexcept>
#include <string>

#include "iforge/rational.hpp"
#include "iforge/staircase.hpp"
#include "json.hpp"

namespace iforge::detail {

using Json = nlohmann::json;

inline Json rational_to_json(const Rational& r) { return r.to_string(); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument("expected a rational as \"num/den\" or an integer");
}

inline Json point_to_json(const Point2& p) { return Json::array({rational_to_json(p.x), rational_to_json(p.y)}); }

inline Point2 point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a point [x, y]");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace iforge::detail
