#include "iforge/interleaving.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <stdexcept>

#include "workers.hpp"

namespace iforge {

namespace {

void require_square(const StaircaseSum& m, const StaircaseSum& n) {
  if (m.summands.size() != n.summands.size()) {
    throw std::invalid_argument("staircase sums have " + std::to_string(m.summands.size()) + " and " +
                                std::to_string(n.summands.size()) + " summands; equal counts required");
  }
  if (m.field != n.field) throw std::invalid_argument("staircase sums over different fields");
}

}  // namespace

std::vector<std::vector<Rational>> distance_matrix(const StaircaseSum& m, const StaircaseSum& n) {
  std::vector<std::vector<Rational>> d(m.summands.size(), std::vector<Rational>(n.summands.size()));
  for (std::size_t i = 0; i < m.summands.size(); ++i)
    for (std::size_t j = 0; j < n.summands.size(); ++j) d[i][j] = dshift_distance(m.summands[i], n.summands[j]);
  return d;
}

std::pair<std::vector<Cell>, std::vector<Cell>> pattern_at(const StaircaseSum& m, const StaircaseSum& n,
                                                           const Rational& eps) {
  require_square(m, n);
  const auto k = static_cast<std::uint32_t>(m.summands.size());
  std::vector<Cell> P, Q;
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j)
      if (dshift_distance(m.summands[i], n.summands[j]) > eps) P.push_back({i + 1, j + 1});
  for (std::uint32_t j = 0; j < k; ++j)
    for (std::uint32_t i = 0; i < k; ++i)
      if (dshift_distance(n.summands[j], m.summands[i]) > eps) Q.push_back({j + 1, i + 1});
  return {P, Q};
}

StaircaseDecision decide_interleaving_staircase(const StaircaseSum& m, const StaircaseSum& n, const Rational& eps,
                                                std::uint64_t budget) {
  auto [P, Q] = pattern_at(m, n, eps);
  CiInstance inst{static_cast<std::uint32_t>(m.summands.size()), m.field, P, Q};
  auto r = solve_ci(inst, budget);
  StaircaseDecision out{r.status, std::nullopt, r.nodes};
  if (r.solution) {
    // A is indexed (source, target); the morphism matrix is target x source
    out.certificate = StaircaseCertificate{eps, {r.solution->A.transpose()}, {r.solution->B.transpose()}};
  }
  return out;
}

bool verify_staircase_certificate(const StaircaseSum& m, const StaircaseSum& n, const StaircaseCertificate& c) {
  require_square(m, n);
  const auto k = m.summands.size();
  const auto& f = c.f.matrix;
  const auto& g = c.g.matrix;
  if (f.rows() != k || f.cols() != k || g.rows() != k || g.cols() != k) return false;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (f.at(j, i) != 0 && dshift_distance(m.summands[i], n.summands[j]) > c.eps) return false;
      if (g.at(i, j) != 0 && dshift_distance(n.summands[j], m.summands[i]) > c.eps) return false;
    }
  }
  return mat_mul(g, f).is_identity() && mat_mul(f, g).is_identity();
}

std::vector<Rational> candidate_eps(const StaircaseSum& m, const StaircaseSum& n) {
  std::set<Rational> c{Rational(0)};
  for (const auto& row : distance_matrix(m, n)) c.insert(row.begin(), row.end());
  for (const auto& row : distance_matrix(n, m)) c.insert(row.begin(), row.end());
  return {c.begin(), c.end()};
}

DistanceResult interleaving_distance_staircase(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t budget) {
  require_square(m, n);
  const auto candidates = candidate_eps(m, n);
  const std::size_t workers = std::max<std::size_t>(1, detail::worker_count());
  for (std::size_t start = 0; start < candidates.size(); start += workers) {
    const std::size_t stop = std::min(candidates.size(), start + workers);
    std::vector<StaircaseDecision> batch(stop - start);
    if (stop - start == 1) {
      batch[0] = decide_interleaving_staircase(m, n, candidates[start], budget);
    } else {
      std::vector<std::future<StaircaseDecision>> jobs;
      for (std::size_t i = start; i < stop; ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
          return decide_interleaving_staircase(m, n, candidates[i], budget);
        }));
      }
      for (std::size_t i = 0; i < jobs.size(); ++i) batch[i] = jobs[i].get();
    }
    // first in ascending order wins; an earlier budget failure makes the answer unknown
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i].status == SolveStatus::BudgetExceeded) return {SolveStatus::BudgetExceeded, candidates[start + i], {}};
      if (batch[i].status == SolveStatus::Solved) {
        return {SolveStatus::Solved, candidates[start + i], batch[i].certificate};
      }
    }
  }
  // unreachable for square sums: the identity works at the largest candidate
  return {SolveStatus::NoSolution, Rational(0), std::nullopt};
}

std::pair<StaircaseSum, StaircaseSum> ci_to_modules(const CiInstance& inst) {
  inst.validate();
  if (inst.n == 0) throw std::invalid_argument("ci_to_modules: n must be at least 1");
  const std::int64_t n = inst.n;
  const std::int64_t reach = 4 * n * n;
  auto baseS = [](std::int64_t t) { return t >= 0 ? Point2{-t, t} : Point2{-t - 1, t - 1}; };
  auto baseT = [](std::int64_t t) { return t <= 0 ? Point2{-t, t} : Point2{-t - 1, t - 1}; };

  // corner of each staircase keyed by its t
  std::vector<std::map<std::int64_t, Point2>> S(n), T(n);
  for (std::int64_t t = -reach; t <= reach; t += 2) {
    for (std::int64_t i = 0; i < n; ++i) {
      S[i][t] = baseS(t);
      T[i][t] = baseT(t);
    }
  }
  auto P = inst.P;
  auto Q = inst.Q;
  std::sort(P.begin(), P.end());
  std::sort(Q.begin(), Q.end());
  const Rational two(2);
  for (std::size_t k = 0; k < P.size(); ++k) {
    const std::int64_t t = 4 * static_cast<std::int64_t>(k + 1) - 2;
    auto& s = S[P[k].first - 1][t];
    s = s - two;
    auto& c = T[P[k].second - 1][t];
    c = c + two;
  }
  for (std::size_t k = 0; k < Q.size(); ++k) {
    const std::int64_t t = -(4 * static_cast<std::int64_t>(k + 1) - 2);
    auto& c = T[Q[k].first - 1][t];
    c = c - two;
    auto& s = S[Q[k].second - 1][t];
    s = s + two;
  }
  StaircaseSum m{inst.field, {}}, nn{inst.field, {}};
  auto build = [](const std::map<std::int64_t, Point2>& corners) {
    std::vector<Point2> pts;
    for (const auto& [t, p] : corners) pts.push_back(p);
    return normalize(std::move(pts));
  };
  for (std::int64_t i = 0; i < n; ++i) {
    m.summands.push_back(build(S[i]));
    nn.summands.push_back(build(T[i]));
  }
  return {m, nn};
}

namespace {

FieldMatrix unit_column(const PrimeField& f, std::size_t size, std::size_t at) {
  FieldMatrix e(f, size, 1);
  e.set(at, 0, 1);
  return e;
}

FieldMatrix lift_column(const FieldMatrix& lift, std::size_t c) {
  FieldMatrix out(lift.field(), lift.rows(), 1);
  for (std::size_t r = 0; r < lift.rows(); ++r) out.set(r, 0, lift.at(r, c));
  return out;
}

// Conditions of the form sum_k c_k W[k] = rhs, one block per generator, with W bilinear in (g_k, f_l).
struct BilinearBlock {
  std::vector<std::vector<FieldMatrix>> w;  // [k][l], each a column vector
  FieldMatrix rhs;
};

bool composites_are_shifts(const GradedPresentation& m, const GradedPresentation& n, const Rational& eps,
                          const FieldMatrix& lf, const FieldMatrix& lg) {
  const auto& f = m.field();
  const Rational twice = eps * 2;
  SpaceCache mc(m), nc(n);
  auto gf = mat_mul(lg, lf);
  auto fg = mat_mul(lf, lg);
  for (std::size_t g = 0; g < m.num_generators(); ++g) {
    auto d = mat_add(lift_column(gf, g), mat_scale(unit_column(f, m.num_generators(), g), f.neg(1)));
    if (!mat_mul(mc.at(m.generators()[g] + twice).coords, d).is_zero()) return false;
  }
  for (std::size_t h = 0; h < n.num_generators(); ++h) {
    auto d = mat_add(lift_column(fg, h), mat_scale(unit_column(f, n.num_generators(), h), f.neg(1)));
    if (!mat_mul(nc.at(n.generators()[h] + twice).coords, d).is_zero()) return false;
  }
  return true;
}

}  // namespace

bool verify_presented_certificate(const GradedPresentation& m, const GradedPresentation& n,
                                  const PresentedCertificate& c) {
  if (!(c.f.source() == m) || !(c.f.target() == shift_presentation(n, c.eps))) return false;
  if (!(c.g.source() == n) || !(c.g.target() == shift_presentation(m, c.eps))) return false;
  if (!is_morphism(c.f.source(), c.f.target(), c.f.lift()) || !is_morphism(c.g.source(), c.g.target(), c.g.lift()))
    return false;
  return composites_are_shifts(m, n, c.eps, c.f.lift(), c.g.lift());
}

PresentedDecision decide_interleaving_presented(const GradedPresentation& m, const GradedPresentation& n,
                                                const Rational& eps, std::uint64_t budget) {
  if (m.field() != n.field()) throw std::invalid_argument("decide_interleaving_presented: field mismatch");
  if (eps < 0) throw std::invalid_argument("decide_interleaving_presented: eps must be >= 0");
  const auto& fld = m.field();
  const auto nShift = shift_presentation(n, eps);
  const auto mShift = shift_presentation(m, eps);
  const auto homF = hom_space(m, nShift);
  const auto homG = hom_space(n, mShift);

  // p^dim(homF) candidates for f
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < homF.size(); ++i) {
    if (total > budget / fld.p()) return {SolveStatus::BudgetExceeded, std::nullopt, 0};
    total *= fld.p();
  }
  if (total > budget) return {SolveStatus::BudgetExceeded, std::nullopt, 0};

  const Rational twice = eps * 2;
  SpaceCache mc(m), nc(n);
  const std::size_t dimF = homF.size(), dimG = homG.size();
  const std::size_t a = m.num_generators(), b = n.num_generators();

  std::vector<BilinearBlock> blocks;
  for (std::size_t g = 0; g < a; ++g) {
    const auto& coords = mc.at(m.generators()[g] + twice).coords;
    BilinearBlock blk{std::vector<std::vector<FieldMatrix>>(dimG), mat_mul(coords, unit_column(fld, a, g))};
    for (std::size_t k = 0; k < dimG; ++k)
      for (std::size_t l = 0; l < dimF; ++l)
        blk.w[k].push_back(mat_mul(coords, mat_mul(homG[k].lift(), lift_column(homF[l].lift(), g))));
    blocks.push_back(std::move(blk));
  }
  for (std::size_t h = 0; h < b; ++h) {
    const auto& coords = nc.at(n.generators()[h] + twice).coords;
    BilinearBlock blk{std::vector<std::vector<FieldMatrix>>(dimG), mat_mul(coords, unit_column(fld, b, h))};
    for (std::size_t k = 0; k < dimG; ++k)
      for (std::size_t l = 0; l < dimF; ++l)
        blk.w[k].push_back(mat_mul(coords, mat_mul(homF[l].lift(), lift_column(homG[k].lift(), h))));
    blocks.push_back(std::move(blk));
  }
  std::size_t rows = 0;
  for (const auto& blk : blocks) rows += blk.rhs.rows();

  std::vector<Element> coeffF(dimF, 0);
  std::uint64_t nodes = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    ++nodes;
    FieldMatrix system(fld, rows, dimG);
    std::vector<Element> rhs(rows, 0);
    std::size_t r0 = 0;
    for (const auto& blk : blocks) {
      for (std::size_t r = 0; r < blk.rhs.rows(); ++r) {
        rhs[r0 + r] = blk.rhs.at(r, 0);
        for (std::size_t k = 0; k < dimG; ++k) {
          Element v = 0;
          for (std::size_t l = 0; l < dimF; ++l)
            if (coeffF[l] != 0) v = fld.add(v, fld.mul(coeffF[l], blk.w[k][l].at(r, 0)));
          system.set(r0 + r, k, v);
        }
      }
      r0 += blk.rhs.rows();
    }
    std::optional<std::vector<Element>> coeffG;
    if (dimG == 0) {
      if (std::all_of(rhs.begin(), rhs.end(), [](Element v) { return v == 0; })) coeffG.emplace();
    } else {
      coeffG = solve_linear(system, rhs);
    }
    if (coeffG) {
      auto fMor = dimF ? combine(homF, coeffF) : Morphism(m, nShift, FieldMatrix(fld, b, a));
      auto gMor = dimG ? combine(homG, *coeffG) : Morphism(n, mShift, FieldMatrix(fld, a, b));
      return {SolveStatus::Solved, PresentedCertificate{eps, std::move(fMor), std::move(gMor)}, nodes};
    }
    // odometer, lowest index fastest
    for (std::size_t l = 0; l < dimF; ++l) {
      coeffF[l] = (coeffF[l] + 1) % fld.p();
      if (coeffF[l] != 0) break;
    }
  }
  return {SolveStatus::NoSolution, std::nullopt, nodes};
}

Rational wrap_anchor(const std::vector<const StaircaseSum*>& sums) {
  std::optional<Rational> best;
  for (const auto* m : sums)
    for (const auto& s : m->summands)
      for (const auto& c : s.corners()) {
        auto v = std::max(c.x, c.y);
        if (!best || v > *best) best = v;
      }
  if (!best) throw std::invalid_argument("wrap_anchor: no corners");
  return *best + 1;
}

Rational wrap_coordinate(const Rational& x, std::size_t n, std::size_t i) {
  return x + 7 + Rational(static_cast<std::int64_t>(i), static_cast<std::int64_t>(n + 1));
}

GradedPresentation indecomposable_wrap(const StaircaseSum& sum, std::optional<Rational> x) {
  const std::size_t n = sum.summands.size();
  if (n == 0) throw std::invalid_argument("indecomposable_wrap: empty sum");
  const Rational anchor = x ? *x : wrap_anchor({&sum});
  if (anchor < wrap_anchor({&sum})) throw std::invalid_argument("indecomposable_wrap: x must exceed every corner");

  auto base = sum_presentation(sum);
  const auto& f = sum.field;
  const std::size_t gens = base.num_generators();
  std::vector<std::size_t> first(n + 1, 0);  // index of each summand's first generator, 1-based in j
  {
    std::size_t off = 0;
    for (std::size_t j = 0; j < n; ++j) {
      first[j + 1] = off;
      off += sum.summands[j].size();
    }
  }
  auto s = [&](std::size_t i) { return wrap_coordinate(anchor, n, i); };
  std::vector<Relation> rels = base.relations();
  auto unit = [&](std::size_t j) {
    std::vector<Element> c(gens, 0);
    c[first[j]] = 1;
    return c;
  };

  for (std::size_t j = 2; j <= n; ++j) {
    auto c = unit(j);
    c[first[1]] = f.neg(1);
    rels.push_back({{s(0), s(n)}, std::move(c)});
  }
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (j != i) rels.push_back({{s(i), s(n - i)}, unit(j)});
  for (std::size_t i = 0; i <= n + 1; ++i) {
    const std::size_t survivor = i == 0 ? 1 : (i == n + 1 ? n : i);
    rels.push_back({{s(i), s(n + 1 - i)}, unit(survivor)});
  }
  return GradedPresentation(f, base.generators(), std::move(rels));
}

}  // namespace iforge
