#include "iforge/presentation.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json_util.hpp"

namespace iforge {

GradedPresentation::GradedPresentation(PrimeField field, std::vector<Point2> generators,
                                       std::vector<Relation> relations)
    : field_(field), generators_(std::move(generators)), relations_(std::move(relations)) {
  for (auto& r : relations_) {
    if (r.coeffs.size() != generators_.size()) {
      throw std::invalid_argument("relation at " + r.grade.to_string() + " has " +
                                  std::to_string(r.coeffs.size()) + " coefficients, expected " +
                                  std::to_string(generators_.size()));
    }
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
      r.coeffs[i] %= field_.p();
      if (r.coeffs[i] != 0 && !leq(generators_[i], r.grade)) {
        throw std::invalid_argument("relation at " + r.grade.to_string() + " uses generator " +
                                    std::to_string(i) + " born later at " + generators_[i].to_string());
      }
    }
  }
}

PointSpace eval_space(const GradedPresentation& m, const Point2& p) {
  const auto& f = m.field();
  const std::size_t g = m.num_generators();
  PointSpace out{p, {}, FieldMatrix(f, 0, g), {}, FieldMatrix(f, 0, g)};
  for (std::size_t i = 0; i < g; ++i)
    if (leq(m.generators()[i], p)) out.born.push_back(i);

  // Reduce relations with born columns taken in reverse order; the non-pivot columns are then
  // exactly the unit vectors a greedy pass in generator order would pick.
  std::vector<const Relation*> live;
  for (const auto& r : m.relations())
    if (leq(r.grade, p)) live.push_back(&r);
  const std::size_t b = out.born.size();
  FieldMatrix rev(f, live.size(), b);
  for (std::size_t r = 0; r < live.size(); ++r)
    for (std::size_t k = 0; k < b; ++k) rev.set(r, k, live[r]->coeffs[out.born[b - 1 - k]]);
  auto ech = rref(std::move(rev));

  std::vector<bool> pivotGen(g, false);
  out.relBasis = FieldMatrix(f, ech.pivots.size(), g);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
    pivotGen[out.born[b - 1 - ech.pivots[r]]] = true;
    for (std::size_t k = 0; k < b; ++k) out.relBasis.set(r, out.born[b - 1 - k], ech.reduced.at(r, k));
  }
  for (auto i : out.born)
    if (!pivotGen[i]) out.quotientBasis.push_back(i);

  // class coordinates: eliminate pivot coordinates with the reduced rows, read off the rest
  out.coords = FieldMatrix(f, out.quotientBasis.size(), g);
  for (std::size_t k = 0; k < out.quotientBasis.size(); ++k) {
    const auto q = out.quotientBasis[k];
    out.coords.set(k, q, 1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
      const auto pivot = out.born[b - 1 - ech.pivots[r]];
      out.coords.set(k, pivot, f.neg(out.relBasis.at(r, q)));
    }
  }
  return out;
}

std::size_t eval_dim(const GradedPresentation& m, const Point2& p) { return eval_space(m, p).dim(); }

const PointSpace& SpaceCache::at(const Point2& p) {
  auto it = cache_.find(p);
  if (it == cache_.end()) it = cache_.emplace(p, eval_space(*m_, p)).first;
  return it->second;
}

namespace {

// coords * (unit vectors of `from`'s basis): the map between quotient bases induced by inclusion
FieldMatrix basis_change(const PointSpace& from, const PointSpace& to, const PrimeField& f) {
  FieldMatrix out(f, to.dim(), from.dim());
  for (std::size_t c = 0; c < from.dim(); ++c) {
    const auto g = from.quotientBasis[c];
    for (std::size_t r = 0; r < to.dim(); ++r) out.set(r, c, to.coords.at(r, g));
  }
  return out;
}

FieldMatrix column(const FieldMatrix& m, std::size_t c) {
  FieldMatrix out(m.field(), m.rows(), 1);
  for (std::size_t r = 0; r < m.rows(); ++r) out.set(r, 0, m.at(r, c));
  return out;
}

}  // namespace

FieldMatrix internal_map(const GradedPresentation& m, const Point2& p, const Point2& q) {
  if (!leq(p, q)) throw std::invalid_argument("internal_map: " + p.to_string() + " is not <= " + q.to_string());
  return basis_change(eval_space(m, p), eval_space(m, q), m.field());
}

GradedPresentation direct_sum(const std::vector<GradedPresentation>& ms) {
  if (ms.empty()) throw std::invalid_argument("direct_sum of nothing");
  const auto& f = ms.front().field();
  std::size_t total = 0;
  for (const auto& m : ms) {
    if (m.field() != f) throw std::invalid_argument("direct_sum: field mismatch");
    total += m.num_generators();
  }
  std::vector<Point2> gens;
  std::vector<Relation> rels;
  std::size_t offset = 0;
  for (const auto& m : ms) {
    gens.insert(gens.end(), m.generators().begin(), m.generators().end());
    for (const auto& r : m.relations()) {
      std::vector<Element> c(total, 0);
      std::copy(r.coeffs.begin(), r.coeffs.end(), c.begin() + static_cast<std::ptrdiff_t>(offset));
      rels.push_back({r.grade, std::move(c)});
    }
    offset += m.num_generators();
  }
  return GradedPresentation(f, std::move(gens), std::move(rels));
}

GradedPresentation shift_presentation(const GradedPresentation& m, const Rational& eps) {
  if (eps == 0) return m;
  std::vector<Point2> gens;
  for (const auto& g : m.generators()) gens.push_back(g - eps);
  std::vector<Relation> rels;
  for (const auto& r : m.relations()) rels.push_back({r.grade - eps, r.coeffs});
  return GradedPresentation(m.field(), std::move(gens), std::move(rels));
}

CriticalGrid critical_grid(const std::vector<const GradedPresentation*>& ms, const std::vector<Rational>& shifts) {
  std::set<Rational> xs, ys;
  std::vector<Rational> offsets = shifts;
  if (offsets.empty()) offsets.push_back(0);
  auto take = [&](const Point2& p) {
    for (const auto& s : offsets) {
      xs.insert(p.x - s);
      ys.insert(p.y - s);
    }
  };
  for (const auto* m : ms) {
    for (const auto& g : m->generators()) take(g);
    for (const auto& r : m->relations()) take(r.grade);
  }
  CriticalGrid grid;
  grid.points.reserve(xs.size() * ys.size());
  for (const auto& x : xs)
    for (const auto& y : ys) grid.points.push_back({x, y});
  return grid;
}

bool is_morphism(const GradedPresentation& source, const GradedPresentation& target, const FieldMatrix& lift) {
  if (source.field() != target.field() || lift.field() != source.field()) return false;
  if (lift.rows() != target.num_generators() || lift.cols() != source.num_generators()) return false;
  for (std::size_t g = 0; g < source.num_generators(); ++g)
    for (std::size_t h = 0; h < target.num_generators(); ++h)
      if (lift.at(h, g) != 0 && !leq(target.generators()[h], source.generators()[g])) return false;
  const auto& f = source.field();
  for (const auto& r : source.relations()) {
    FieldMatrix image(f, target.num_generators(), 1);
    for (std::size_t g = 0; g < source.num_generators(); ++g) {
      if (r.coeffs[g] == 0) continue;
      for (std::size_t h = 0; h < target.num_generators(); ++h)
        image.set(h, 0, f.add(image.at(h, 0), f.mul(r.coeffs[g], lift.at(h, g))));
    }
    if (!mat_mul(eval_space(target, r.grade).coords, image).is_zero()) return false;
  }
  return true;
}

Morphism::Morphism(GradedPresentation source, GradedPresentation target, FieldMatrix lift)
    : source_(std::move(source)), target_(std::move(target)), lift_(std::move(lift)) {
  if (!is_morphism(source_, target_, lift_)) throw std::invalid_argument("lift does not define a morphism");
}

FieldMatrix evaluate(const Morphism& f, const Point2& p, SpaceCache& sourceCache, SpaceCache& targetCache) {
  const auto& sp = sourceCache.at(p);
  const auto& tp = targetCache.at(p);
  FieldMatrix picked(f.lift().field(), f.lift().rows(), sp.dim());
  for (std::size_t c = 0; c < sp.dim(); ++c)
    for (std::size_t r = 0; r < f.lift().rows(); ++r) picked.set(r, c, f.lift().at(r, sp.quotientBasis[c]));
  return mat_mul(tp.coords, picked);
}

FieldMatrix evaluate(const Morphism& f, const Point2& p) {
  SpaceCache s(f.source()), t(f.target());
  return evaluate(f, p, s, t);
}

std::vector<Morphism> hom_space(const GradedPresentation& m, const GradedPresentation& n) {
  if (m.field() != n.field()) throw std::invalid_argument("hom_space: field mismatch");
  const auto& f = m.field();
  SpaceCache targets(n);
  // unknowns: coordinates of each generator's image in the quotient basis at its grade
  std::vector<std::size_t> offset(m.num_generators() + 1, 0);
  std::vector<const PointSpace*> at(m.num_generators());
  for (std::size_t g = 0; g < m.num_generators(); ++g) {
    at[g] = &targets.at(m.generators()[g]);
    offset[g + 1] = offset[g] + at[g]->dim();
  }
  const std::size_t unknowns = offset.back();

  std::vector<std::vector<Element>> rows;
  for (const auto& r : m.relations()) {
    const auto& rho = targets.at(r.grade);
    // image of the relation, as a generator vector per unknown, pushed into class coordinates at rho
    for (std::size_t k = 0; k < rho.dim(); ++k) {
      std::vector<Element> row(unknowns, 0);
      for (std::size_t g = 0; g < m.num_generators(); ++g) {
        if (r.coeffs[g] == 0) continue;
        for (std::size_t u = 0; u < at[g]->dim(); ++u) {
          auto v = f.mul(r.coeffs[g], rho.coords.at(k, at[g]->quotientBasis[u]));
          row[offset[g] + u] = f.add(row[offset[g] + u], v);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  FieldMatrix system(f, rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < unknowns; ++c) system.set(r, c, rows[r][c]);
  auto basis = nullspace(system);

  std::vector<Morphism> out;
  for (std::size_t b = 0; b < basis.cols(); ++b) {
    FieldMatrix lift(f, n.num_generators(), m.num_generators());
    for (std::size_t g = 0; g < m.num_generators(); ++g)
      for (std::size_t u = 0; u < at[g]->dim(); ++u) lift.set(at[g]->quotientBasis[u], g, basis.at(offset[g] + u, b));
    out.emplace_back(m, n, std::move(lift));
  }
  return out;
}

Morphism combine(const std::vector<Morphism>& basis, const std::vector<Element>& coeffs) {
  if (basis.empty() || basis.size() != coeffs.size()) throw std::invalid_argument("combine: size mismatch");
  const auto& first = basis.front();
  FieldMatrix lift(first.lift().field(), first.lift().rows(), first.lift().cols());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] != 0) lift = mat_add(lift, mat_scale(basis[i].lift(), coeffs[i]));
  }
  return Morphism(first.source(), first.target(), std::move(lift));
}

bool same_morphism(const Morphism& a, const Morphism& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target())) return false;
  const auto& f = a.lift().field();
  auto diff = mat_add(a.lift(), mat_scale(b.lift(), f.neg(1)));
  SpaceCache t(a.target());
  for (std::size_t g = 0; g < a.source().num_generators(); ++g) {
    if (!mat_mul(t.at(a.source().generators()[g]).coords, column(diff, g)).is_zero()) return false;
  }
  return true;
}

Morphism identity_morphism(const GradedPresentation& m) {
  return Morphism(m, m, FieldMatrix::identity(m.field(), m.num_generators()));
}

std::string presentation_to_json(const GradedPresentation& m) {
  using detail::Json;
  Json gens = Json::array();
  for (const auto& g : m.generators()) gens.push_back(detail::point_to_json(g));
  Json rels = Json::array();
  for (const auto& r : m.relations()) rels.push_back(Json{{"grade", detail::point_to_json(r.grade)}, {"coeffs", r.coeffs}});
  return Json{{"p", m.field().p()}, {"generators", gens}, {"relations", rels}}.dump();
}

GradedPresentation presentation_from_json(const std::string& text) {
  using detail::Json;
  auto j = detail::parse_json(text);
  try {
    PrimeField f(j.at("p").get<std::uint32_t>());
    std::vector<Point2> gens;
    for (const auto& g : j.at("generators")) gens.push_back(detail::point_from_json(g));
    std::vector<Relation> rels;
    if (j.contains("relations")) {
      for (const auto& r : j.at("relations")) {
        std::vector<Element> c;
        for (const auto& v : r.at("coeffs")) c.push_back(f.reduce(v.get<std::int64_t>()));
        rels.push_back({detail::point_from_json(r.at("grade")), std::move(c)});
      }
    }
    return GradedPresentation(f, std::move(gens), std::move(rels));
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("presentation JSON: ") + e.what());
  }
}

}  // namespace iforge
