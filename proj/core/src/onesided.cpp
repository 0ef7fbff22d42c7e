#include "iforge/onesided.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace iforge {

Bound::Bound(Rational value) : infinite_(false), value_(value) {
  if (value_ < 0) throw std::invalid_argument("triviality bound must be >= 0");
}

const Rational& Bound::value() const {
  if (infinite_) throw std::logic_error("infinite bound has no value");
  return value_;
}

std::string Bound::to_string() const { return infinite_ ? "inf" : value_.to_string(); }

Bound Bound::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  return Bound(Rational::parse(text));
}

bool kernel_eps_trivial(const Morphism& f, const Rational& eps) {
  const auto& src = f.source();
  const auto& tgt = f.target();
  SpaceCache sc(src), tc(tgt);
  auto grid = critical_grid({&src, &tgt}, {Rational(0), eps});
  for (const auto& p : grid.points) {
    const auto& sp = sc.at(p);
    if (sp.dim() == 0) continue;
    auto kernel = nullspace(evaluate(f, p, sc, tc));
    if (kernel.cols() == 0) continue;
    const auto& sq = sc.at(p + eps);
    // M_{p -> p+eps} in quotient bases, applied to the kernel basis
    FieldMatrix along(src.field(), sq.dim(), sp.dim());
    for (std::size_t c = 0; c < sp.dim(); ++c)
      for (std::size_t r = 0; r < sq.dim(); ++r) along.set(r, c, sq.coords.at(r, sp.quotientBasis[c]));
    if (!mat_mul(along, kernel).is_zero()) return false;
  }
  return true;
}

bool cokernel_eps_trivial(const Morphism& f, const Rational& eps) {
  const auto& src = f.source();
  const auto& tgt = f.target();
  SpaceCache sc(src), tc(tgt);
  auto grid = critical_grid({&src, &tgt}, {Rational(0), eps});
  for (const auto& p : grid.points) {
    const auto& tp = tc.at(p);
    if (tp.dim() == 0) continue;
    const auto q = p + eps;
    const auto& tq = tc.at(q);
    FieldMatrix along(tgt.field(), tq.dim(), tp.dim());
    for (std::size_t c = 0; c < tp.dim(); ++c)
      for (std::size_t r = 0; r < tq.dim(); ++r) along.set(r, c, tq.coords.at(r, tp.quotientBasis[c]));
    auto image = evaluate(f, q, sc, tc);
    if (mat_rank(hconcat(image, along)) != mat_rank(image)) return false;
  }
  return true;
}

bool kernel_trivial(const Morphism& f, const Bound& s) { return s.is_infinite() || kernel_eps_trivial(f, s.value()); }

bool cokernel_trivial(const Morphism& f, const Bound& t) {
  return t.is_infinite() || cokernel_eps_trivial(f, t.value());
}

std::vector<std::vector<bool>> allowed_entries(const StaircaseSum& m, const StaircaseSum& n) {
  std::vector<std::vector<bool>> ok(n.summands.size(), std::vector<bool>(m.summands.size()));
  for (std::size_t j = 0; j < n.summands.size(); ++j)
    for (std::size_t i = 0; i < m.summands.size(); ++i)
      ok[j][i] = dshift_distance(m.summands[i], n.summands[j]) == 0;
  return ok;
}

Morphism morphism_from_matrix(const StaircaseSum& m, const StaircaseSum& n, const MorphismMatrix& f) {
  const auto& mat = f.matrix;
  if (mat.rows() != n.summands.size() || mat.cols() != m.summands.size())
    throw std::invalid_argument("morphism matrix shape does not match the summand counts");
  auto ok = allowed_entries(m, n);
  auto src = sum_presentation(m);
  auto tgt = sum_presentation(n);
  std::vector<std::size_t> srcOff, tgtOff;
  std::size_t off = 0;
  for (const auto& s : m.summands) {
    srcOff.push_back(off);
    off += s.size();
  }
  off = 0;
  for (const auto& s : n.summands) {
    tgtOff.push_back(off);
    off += s.size();
  }
  FieldMatrix lift(m.field, tgt.num_generators(), src.num_generators());
  for (std::size_t i = 0; i < m.summands.size(); ++i) {
    for (std::size_t j = 0; j < n.summands.size(); ++j) {
      const auto v = mat.at(j, i);
      if (v == 0) continue;
      if (!ok[j][i]) throw std::invalid_argument("morphism matrix is nonzero on a forbidden entry");
      const auto& tc = n.summands[j].corners();
      const auto& sc = m.summands[i].corners();
      for (std::size_t a = 0; a < sc.size(); ++a) {
        // any target corner below the source corner represents the same class
        auto it = std::find_if(tc.begin(), tc.end(), [&](const Point2& b) { return leq(b, sc[a]); });
        lift.set(tgtOff[j] + static_cast<std::size_t>(it - tc.begin()), srcOff[i] + a, v);
      }
    }
  }
  return Morphism(std::move(src), std::move(tgt), std::move(lift));
}

namespace {

std::set<Rational> corner_coords(const StaircaseSum& m, bool x) {
  std::set<Rational> out;
  for (const auto& s : m.summands)
    for (const auto& c : s.corners()) out.insert(x ? c.x : c.y);
  return out;
}

std::vector<Point2> coordinate_grid(const StaircaseSum& m, const StaircaseSum& n, const Rational& shift) {
  auto xs = corner_coords(m, true);
  auto ys = corner_coords(m, false);
  for (auto v : corner_coords(n, true)) xs.insert(v);
  for (auto v : corner_coords(n, false)) ys.insert(v);
  std::set<Rational> xs2 = xs, ys2 = ys;
  for (const auto& v : xs) xs2.insert(v - shift);
  for (const auto& v : ys) ys2.insert(v - shift);
  std::vector<Point2> out;
  for (const auto& x : xs2)
    for (const auto& y : ys2) out.push_back({x, y});
  return out;
}

std::vector<std::size_t> members(const StaircaseSum& m, const Point2& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.summands.size(); ++i)
    if (contains(m.summands[i], p)) out.push_back(i);
  return out;
}

}  // namespace

bool staircase_kernel_trivial(const StaircaseSum& m, const StaircaseSum& n, const FieldMatrix& f, const Bound& s) {
  if (s.is_infinite()) return true;
  // internal maps of staircase sums are coordinate inclusions, so a kernel vector never dies
  for (const auto& p : coordinate_grid(m, n, s.value())) {
    auto cols = members(m, p);
    if (cols.empty()) continue;
    if (mat_rank(f.select(members(n, p), cols)) != cols.size()) return false;
  }
  return true;
}

bool staircase_cokernel_trivial(const StaircaseSum& m, const StaircaseSum& n, const FieldMatrix& f, const Bound& t) {
  if (t.is_infinite()) return true;
  const auto& eps = t.value();
  for (const auto& p : coordinate_grid(m, n, eps)) {
    auto before = members(n, p);
    if (before.empty()) continue;
    const auto q = p + eps;
    auto rows = members(n, q);
    auto image = f.select(rows, members(m, q));
    FieldMatrix along(f.field(), rows.size(), before.size());
    for (std::size_t c = 0; c < before.size(); ++c) {
      auto it = std::find(rows.begin(), rows.end(), before[c]);
      along.set(static_cast<std::size_t>(it - rows.begin()), c, 1);
    }
    if (mat_rank(hconcat(image, along)) != mat_rank(image)) return false;
  }
  return true;
}

namespace {

// Column values with the first nonzero entry equal to 1 (plus zero), restricted to allowed rows.
std::vector<std::vector<Element>> normalized_columns(const PrimeField& f, const std::vector<bool>& allowed) {
  std::vector<std::size_t> free;
  for (std::size_t r = 0; r < allowed.size(); ++r)
    if (allowed[r]) free.push_back(r);
  std::vector<std::vector<Element>> out;
  std::vector<Element> v(allowed.size(), 0);
  out.push_back(v);
  // odometer over free rows, keep vectors whose leading free entry is 1
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < free.size(); ++i) total *= f.p();
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (auto r : free) {
      v[r] = static_cast<Element>(c % f.p());
      c /= f.p();
    }
    auto lead = std::find_if(free.begin(), free.end(), [&](std::size_t r) { return v[r] != 0; });
    if (v[*lead] == 1) out.push_back(v);
  }
  return out;
}

// Depth-first over columns. `partial` checks the conditions whose last column was just set;
// `accept` checks the complete matrix.
template <typename Partial, typename Accept>
OneSidedDecision column_search(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget,
                               Partial&& partial, Accept&& accept) {
  const auto& f = m.field;
  const std::size_t rows = n.summands.size(), cols = m.summands.size();
  auto ok = allowed_entries(m, n);
  std::vector<std::vector<std::vector<Element>>> options(cols);
  for (std::size_t i = 0; i < cols; ++i) {
    std::vector<bool> allowed(rows);
    for (std::size_t j = 0; j < rows; ++j) allowed[j] = ok[j][i];
    options[i] = normalized_columns(f, allowed);
  }
  FieldMatrix mat(f, rows, cols);
  OneSidedDecision out;
  if (cols == 0) {
    if (accept(mat)) out = {SolveStatus::Solved, MorphismMatrix{mat}, 1};
    return out;
  }
  std::vector<std::size_t> choice(cols, 0);
  std::size_t col = 0;
  while (true) {
    if (col == cols) {
      if (accept(mat)) {
        out.status = SolveStatus::Solved;
        out.morphism = MorphismMatrix{mat};
        return out;
      }
      --col;
      continue;
    }
    if (choice[col] == options[col].size()) {
      choice[col] = 0;
      if (col == 0) return out;
      --col;
      continue;
    }
    if (++out.nodes > budget) {
      out.status = SolveStatus::BudgetExceeded;
      return out;
    }
    const auto& v = options[col][choice[col]++];
    for (std::size_t j = 0; j < rows; ++j) mat.set(j, col, v[j]);
    if (partial(mat, col)) ++col;
  }
}

OneSidedDecision rank_search(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget, bool surjective) {
  if (m.field != n.field) throw std::invalid_argument("staircase sums over different fields");
  std::vector<std::vector<RankCondition>> byLast(m.summands.size());
  for (auto& c : rank_conditions(m, n)) {
    const auto need = surjective ? c.rows.size() : c.cols.size();
    if (need == 0) continue;
    if (c.cols.empty() || c.rows.size() < need || c.cols.size() < need) return {};  // rank can never reach need
    byLast[c.cols.back()].push_back(std::move(c));
  }
  auto partial = [&](const FieldMatrix& mat, std::size_t col) {
    for (const auto& c : byLast[col]) {
      const auto need = surjective ? c.rows.size() : c.cols.size();
      if (mat_rank(mat.select(c.rows, c.cols)) != need) return false;
    }
    return true;
  };
  return column_search(m, n, budget, partial, [](const FieldMatrix&) { return true; });
}

}  // namespace

std::vector<RankCondition> rank_conditions(const StaircaseSum& m, const StaircaseSum& n) {
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  std::vector<RankCondition> out;
  for (const auto& p : coordinate_grid(m, n, Rational(0))) {
    auto rows = members(n, p);
    auto cols = members(m, p);
    if (rows.empty() && cols.empty()) continue;
    if (seen.insert({rows, cols}).second) out.push_back({std::move(rows), std::move(cols)});
  }
  return out;
}

OneSidedDecision exists_surjection(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget) {
  return rank_search(m, n, budget, true);
}

OneSidedDecision exists_injection(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget) {
  return rank_search(m, n, budget, false);
}

OneSidedDecision exists_st_trivial_morphism(const StaircaseSum& m, const StaircaseSum& n, const TrivialityParams& params,
                                            std::uint64_t budget) {
  if (m.field != n.field) throw std::invalid_argument("staircase sums over different fields");
  auto partial = [](const FieldMatrix&, std::size_t) { return true; };
  auto accept = [&](const FieldMatrix& mat) {
    return staircase_kernel_trivial(m, n, mat, params.s) && staircase_cokernel_trivial(m, n, mat, params.t);
  };
  return column_search(m, n, budget, partial, accept);
}

PresentedCertificate complete_interleaving_from_injection(const Morphism& f, const Rational& eps) {
  if (!kernel_eps_trivial(f, Rational(0))) throw std::invalid_argument("morphism is not injective");
  if (!cokernel_eps_trivial(f, eps * 2)) throw std::invalid_argument("cokernel is not 2eps-trivial");
  const auto& m = f.source();
  const auto n = shift_presentation(f.target(), -eps);
  const auto mShift = shift_presentation(m, eps);
  const auto& fld = m.field();
  SpaceCache sc(m), tc(f.target());
  FieldMatrix lift(fld, m.num_generators(), n.num_generators());
  for (std::size_t h = 0; h < n.num_generators(); ++h) {
    // the unique m in M_{delta+eps} with f(m) = N_{delta -> delta+2eps}(e_h)
    const auto q = n.generators()[h] + eps;
    auto image = evaluate(f, q, sc, tc);
    const auto& tq = tc.at(q);
    std::vector<Element> rhs(tq.dim());
    for (std::size_t r = 0; r < tq.dim(); ++r) rhs[r] = tq.coords.at(r, h);
    std::optional<std::vector<Element>> pre;
    if (image.cols() == 0) {
      if (std::all_of(rhs.begin(), rhs.end(), [](Element v) { return v == 0; })) pre.emplace();
    } else {
      pre = solve_linear(image, rhs);
    }
    if (!pre) throw std::invalid_argument("no preimage at " + q.to_string() + "; cokernel condition fails");
    const auto& sq = sc.at(q);
    for (std::size_t k = 0; k < sq.dim(); ++k) lift.set(sq.quotientBasis[k], h, (*pre)[k]);
  }
  PresentedCertificate cert{eps, f, Morphism(n, mShift, std::move(lift))};
  if (!verify_presented_certificate(m, n, cert)) throw std::logic_error("completed pair is not an interleaving");
  return cert;
}

Morphism dual_morphism(const StaircaseSum& m, const StaircaseSum& n, const MorphismMatrix& f, const Rational& zCut) {
  return Morphism(dual_sum_presentation(n, zCut), dual_sum_presentation(m, zCut), f.matrix.transpose());
}

SurjectionGadget sat3_to_surjection(const Cnf3& f, const PrimeField& field) {
  f.validate();
  const std::uint32_t q = field.p();
  const std::uint32_t nv = f.numVars;
  SurjectionGadget g;
  g.q = q;
  g.summandNames = {"A", "B"};
  for (std::uint32_t i = 1; i <= nv; ++i)
    for (std::uint32_t r = 1; r <= q; ++r) g.summandNames.push_back("M_" + std::to_string(i) + "^" + std::to_string(r));
  g.summandNames.push_back("N_1");
  g.summandNames.push_back("N_2");
  auto mi = [&](std::uint32_t i, std::uint32_t r) { return g.summandNames[2 + (i - 1) * q + (r - 1)]; };

  auto add = [&](std::string label, std::vector<std::string> who) {
    const std::int64_t k = static_cast<std::int64_t>(g.corners.size()) + 1;
    g.corners.push_back({std::move(label), Point2{k, -k}, std::move(who)});
  };
  add("a", {"A", "N_1"});
  add("b", {"B", "N_2"});
  for (std::uint32_t i = 1; i <= nv; ++i)
    for (std::uint32_t r = 1; r <= q; ++r)
      add("g_" + std::to_string(i) + "^" + std::to_string(r), {"A", mi(i, r), "N_1", "N_2"});
  for (std::uint32_t i = 1; i <= nv; ++i)
    for (std::uint32_t r = 1; r <= q; ++r)
      for (std::uint32_t s = r + 1; s <= q; ++s)
        add("g_" + std::to_string(i) + "^{" + std::to_string(r) + "," + std::to_string(s) + "}",
            {mi(i, r), mi(i, s), "N_1", "N_2"});
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    auto lits = std::vector<Literal>(f.clauses[j].begin(), f.clauses[j].end());
    std::sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
    std::vector<std::vector<std::uint32_t>> X;
    for (const auto& l : lits) {
      std::vector<std::uint32_t> xs;
      if (!l.negated) {
        xs.push_back(1);
      } else {
        for (std::uint32_t r = 2; r <= q; ++r) xs.push_back(r);
      }
      X.push_back(std::move(xs));
    }
    for (auto y : X[0])
      for (auto z : X[1])
        for (auto w : X[2])
          add("h_" + std::to_string(j + 1) + "^{" + std::to_string(y) + "," + std::to_string(z) + "," +
                  std::to_string(w) + "}",
              {"B", mi(lits[0].var + 1, y), mi(lits[1].var + 1, z), mi(lits[2].var + 1, w), "N_1", "N_2"});
  }

  std::map<std::string, std::vector<Point2>> cornersOf;
  for (const auto& c : g.corners)
    for (const auto& who : c.members) cornersOf[who].push_back(c.at);
  g.M.field = field;
  g.N.field = field;
  for (std::size_t k = 0; k + 2 < g.summandNames.size(); ++k) g.M.summands.push_back(normalize(cornersOf[g.summandNames[k]]));
  g.N.summands.push_back(normalize(cornersOf["N_1"]));
  g.N.summands.push_back(normalize(cornersOf["N_2"]));
  return g;
}

FieldMatrix surjection_normal_form(const FieldMatrix& f) {
  FieldMatrix out = f;
  const auto& fld = f.field();
  for (std::size_t c = 0; c < f.cols(); ++c) {
    std::size_t r = f.rows();
    while (r > 0 && f.at(r - 1, c) == 0) --r;
    if (r == 0) continue;
    const auto s = fld.inv(f.at(r - 1, c));
    for (std::size_t k = 0; k < f.rows(); ++k) out.set(k, c, fld.mul(f.at(k, c), s));
  }
  // column A carries its 1 in the first row
  if (out.cols() > 0 && out.rows() > 0 && out.at(0, 0) != 0) {
    const auto s = fld.inv(out.at(0, 0));
    for (std::size_t k = 0; k < out.rows(); ++k) out.set(k, 0, fld.mul(out.at(k, 0), s));
  }
  return out;
}

Assignment surjection_assignment(const Cnf3& f, const FieldMatrix& normalized) {
  const std::uint32_t q = normalized.field().p();
  Assignment a(f.numVars, false);
  for (std::uint32_t i = 0; i < f.numVars; ++i) a[i] = normalized.at(0, 2 + static_cast<std::size_t>(i) * q) != 0;
  return a;
}

}  // namespace iforge
