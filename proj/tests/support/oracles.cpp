#include "oracles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace iforge::testing {

FieldMatrix random_matrix(Rng& rng, const PrimeField& f, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::uint32_t> d(0, f.p() - 1);
  FieldMatrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, d(rng));
  return m;
}

FieldMatrix random_invertible(Rng& rng, const PrimeField& f, std::size_t n) {
  while (true) {
    auto m = random_matrix(rng, f, n, n);
    if (mat_rank(m) == n) return m;
  }
}

Cnf3 random_cnf3(Rng& rng, std::uint32_t numVars, std::uint32_t numClauses) {
  if (numVars < 3) throw std::invalid_argument("random_cnf3 needs at least 3 variables");
  Cnf3 f;
  f.numVars = numVars;
  std::uniform_int_distribution<std::uint32_t> var(0, numVars - 1);
  std::bernoulli_distribution sign(0.5);
  for (std::uint32_t c = 0; c < numClauses; ++c) {
    std::set<std::uint32_t> used;
    Clause3 cl{};
    for (auto& lit : cl) {
      std::uint32_t v;
      do {
        v = var(rng);
      } while (used.count(v) != 0);
      used.insert(v);
      lit = Literal{v, sign(rng)};
    }
    f.clauses.push_back(cl);
  }
  return f;
}

namespace {

// Odometer over `slots` digits base p; returns false after the last combination.
bool advance(std::vector<std::uint32_t>& digits, std::uint32_t p) {
  for (auto& d : digits) {
    if (++d < p) return true;
    d = 0;
  }
  return false;
}

std::uint64_t count_or_throw(std::size_t slots, std::uint32_t p, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    total *= p;
    if (total > limit) throw std::length_error("brute-force oracle: search space exceeds limit");
  }
  return total;
}

}  // namespace

std::optional<CiSolution> brute_force_gci(const GciInstance& inst, std::uint64_t limit) {
  const auto& f = inst.field;
  std::set<Cell> P(inst.P.begin(), inst.P.end()), Q(inst.Q.begin(), inst.Q.end());
  std::vector<Cell> aFree, bFree;
  for (std::uint32_t i = 1; i <= inst.n; ++i)
    for (std::uint32_t j = 1; j <= inst.m; ++j)
      if (!P.count({i, j})) aFree.emplace_back(i, j);
  for (std::uint32_t i = 1; i <= inst.m; ++i)
    for (std::uint32_t j = 1; j <= inst.n; ++j)
      if (!Q.count({i, j})) bFree.emplace_back(i, j);
  count_or_throw(aFree.size() + bFree.size(), f.p(), limit);
  std::vector<std::uint32_t> digits(aFree.size() + bFree.size(), 0);
  do {
    FieldMatrix A(f, inst.n, inst.m), B(f, inst.m, inst.n);
    for (std::size_t t = 0; t < aFree.size(); ++t) A.set(aFree[t].first - 1, aFree[t].second - 1, digits[t]);
    for (std::size_t t = 0; t < bFree.size(); ++t)
      B.set(bFree[t].first - 1, bFree[t].second - 1, digits[aFree.size() + t]);
    bool ok = true;
    for (const auto& [i, j] : inst.R) {
      std::uint64_t s = 0;
      for (std::uint32_t k = 0; k < inst.m; ++k) s += A.at(i - 1, k) * B.at(k, j - 1);
      if (s % f.p() != (i == j ? 1u : 0u)) {
        ok = false;
        break;
      }
    }
    if (ok) return CiSolution{std::move(A), std::move(B)};
  } while (advance(digits, f.p()));
  return std::nullopt;
}

std::optional<CiSolution> brute_force_ci(const CiInstance& inst, std::uint64_t limit) {
  const auto& f = inst.field;
  const auto n = inst.n;
  std::set<Cell> P(inst.P.begin(), inst.P.end());
  std::vector<Cell> aFree;
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j)
      if (!P.count({i, j})) aFree.emplace_back(i, j);
  count_or_throw(aFree.size(), f.p(), limit);
  std::vector<std::uint32_t> digits(aFree.size(), 0);
  do {
    FieldMatrix A(f, n, n);
    for (std::size_t t = 0; t < aFree.size(); ++t) A.set(aFree[t].first - 1, aFree[t].second - 1, digits[t]);
    auto B = mat_inverse(A);
    if (!B) continue;
    bool ok = true;
    for (const auto& [i, j] : inst.Q)
      if (B->at(i - 1, j - 1) != 0) ok = false;
    if (ok) return CiSolution{std::move(A), std::move(*B)};
  } while (advance(digits, f.p()));
  return std::nullopt;
}

bool satisfiable_by_enumeration(const Cnf3& f) {
  Assignment a(f.numVars, false);
  while (true) {
    if (eval_assignment(f, a)) return true;
    std::size_t i = 0;
    while (i < a.size() && a[i]) a[i++] = false;
    if (i == a.size()) return false;
    a[i] = true;
  }
}

Staircase random_staircase(Rng& rng, int maxCorners, int lo, int hi) {
  std::uniform_int_distribution<int> count(1, maxCorners), coord(lo, hi);
  std::vector<Point2> pts;
  for (int k = count(rng); k > 0; --k) pts.push_back({Rational(coord(rng)), Rational(coord(rng))});
  return normalize(std::move(pts));
}

StaircaseSum random_sum(Rng& rng, const PrimeField& f, int maxSummands, int maxCorners, int lo, int hi) {
  std::uniform_int_distribution<int> count(1, maxSummands);
  StaircaseSum m{f, {}};
  for (int k = count(rng); k > 0; --k) m.summands.push_back(random_staircase(rng, maxCorners, lo, hi));
  return m;
}

std::pair<StaircaseSum, StaircaseSum> random_nested_pair(Rng& rng, const PrimeField& f) {
  auto m = random_sum(rng, f, 2, 3, -3, 3);
  StaircaseSum n{f, {}};
  std::uniform_int_distribution<int> grow(0, 2);
  std::bernoulli_distribution fresh(0.25);
  for (const auto& s : m.summands)
    n.summands.push_back(fresh(rng) ? random_staircase(rng, 3, -3, 3) : shift(s, Rational(grow(rng))));
  if (fresh(rng)) n.summands.push_back(random_staircase(rng, 2, -3, 3));
  return {m, n};
}

FieldMatrix random_allowed_matrix(Rng& rng, const StaircaseSum& m, const StaircaseSum& n) {
  FieldMatrix a(m.field, n.summands.size(), m.summands.size());
  std::bernoulli_distribution bit(0.8);
  for (std::size_t j = 0; j < n.summands.size(); ++j)
    for (std::size_t i = 0; i < m.summands.size(); ++i) {
      const auto& c = m.summands[i].corners();
      bool inside = std::all_of(c.begin(), c.end(), [&](const Point2& x) { return contains(n.summands[j], x); });
      if (inside && bit(rng)) a.set(j, i, 1);
    }
  return a;
}

namespace {

std::int64_t as_int(const Rational& r) {
  if (r.den() != 1) throw std::invalid_argument("integer corners expected");
  return r.num();
}

}  // namespace

Rational shift_distance_by_membership(const Staircase& s, const Staircase& t) {
  std::int64_t lo = 0, hi = 0;
  for (const auto* st : {&s, &t})
    for (const auto& c : st->corners()) {
      lo = std::min({lo, as_int(c.x), as_int(c.y)});
      hi = std::max({hi, as_int(c.x), as_int(c.y)});
    }
  for (std::int64_t eps = 0;; ++eps) {
    auto shifted = shift(t, Rational(eps));
    bool inside = true;
    for (std::int64_t x = lo - 1; x <= hi + 1 && inside; ++x)
      for (std::int64_t y = lo - 1; y <= hi + 1 && inside; ++y) {
        Point2 p{Rational(x), Rational(y)};
        if (contains(s, p) && !contains(shifted, p)) inside = false;
      }
    if (inside) return Rational(eps);
  }
}

bool surjection_by_enumeration(const StaircaseSum& m, const StaircaseSum& n, std::uint64_t limit) {
  const auto& f = m.field;
  auto inside = [](const Staircase& a, const Staircase& b) {
    return std::all_of(a.corners().begin(), a.corners().end(), [&](const Point2& c) { return contains(b, c); });
  };
  std::vector<std::pair<std::size_t, std::size_t>> free;
  for (std::size_t j = 0; j < n.summands.size(); ++j)
    for (std::size_t i = 0; i < m.summands.size(); ++i)
      if (inside(m.summands[i], n.summands[j])) free.emplace_back(j, i);
  count_or_throw(free.size(), f.p(), limit);

  std::vector<Rational> xs, ys;
  for (const auto* sum : {&m, &n})
    for (const auto& st : sum->summands)
      for (const auto& c : st.corners()) {
        xs.push_back(c.x);
        ys.push_back(c.y);
      }
  std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> checks;
  for (const auto& x : xs)
    for (const auto& y : ys) {
      Point2 p{x, y};
      std::vector<std::size_t> rows, cols;
      for (std::size_t j = 0; j < n.summands.size(); ++j)
        if (contains(n.summands[j], p)) rows.push_back(j);
      for (std::size_t i = 0; i < m.summands.size(); ++i)
        if (contains(m.summands[i], p)) cols.push_back(i);
      checks.emplace_back(std::move(rows), std::move(cols));
    }

  std::vector<std::uint32_t> digits(free.size(), 0);
  do {
    FieldMatrix a(f, n.summands.size(), m.summands.size());
    for (std::size_t k = 0; k < free.size(); ++k) a.set(free[k].first, free[k].second, digits[k]);
    bool ok = true;
    for (const auto& [rows, cols] : checks) {
      if (rows.empty()) continue;
      FieldMatrix sub(f, rows.size(), cols.size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) sub.set(r, c, a.at(rows[r], cols[c]));
      if (mat_rank(sub) != rows.size()) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (advance(digits, f.p()));
  return false;
}

}  // namespace iforge::testing
