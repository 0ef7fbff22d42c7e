#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "iforge/ci.hpp"
#include "iforge/interleaving.hpp"
#include "oracles.hpp"

using namespace iforge;

namespace {

Point2 pt(std::int64_t x, std::int64_t y) { return {Rational(x), Rational(y)}; }

StaircaseSum single(std::int64_t x, std::int64_t y, std::uint32_t p = 2) {
  return StaircaseSum{PrimeField(p), {normalize({pt(x, y)})}};
}

CiInstance pattern_instance(std::uint32_t mask) {
  CiInstance inst{2, PrimeField(2), {}, {}};
  for (std::uint32_t b = 0; b < 4; ++b) {
    if ((mask >> b) & 1u) inst.P.emplace_back(b / 2 + 1, b % 2 + 1);
    if ((mask >> (b + 4)) & 1u) inst.Q.emplace_back(b / 2 + 1, b % 2 + 1);
  }
  return inst;
}

bool solvable(const CiInstance& inst) { return solve_ci(inst).status == SolveStatus::Solved; }

// Candidate eps values plus midpoints between neighbours and one point past the end, ascending.
std::vector<Rational> probe_eps(const StaircaseSum& m, const StaircaseSum& n) {
  auto c = candidate_eps(m, n);
  std::vector<Rational> out = c;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) out.push_back((c[k] + c[k + 1]) / Rational(2));
  out.push_back(c.back() + Rational(1, 2));
  std::sort(out.begin(), out.end());
  return out;
}

// Expected dimension of the wrap at p: zero past the corners (s_i, s_{n+1-i}), one on the rectangles,
// the sum everywhere else.
std::size_t wrap_expected(const StaircaseSum& m, const Rational& x, const Point2& p) {
  const std::size_t n = m.summands.size();
  auto s = [&](std::size_t i) { return wrap_coordinate(x, n, i); };
  for (std::size_t i = 0; i <= n + 1; ++i)
    if (leq({s(i), s(n + 1 - i)}, p)) return 0;
  for (std::size_t i = 0; i <= n; ++i)
    if (s(i) <= p.x && p.x < s(i + 1) && s(n - i) <= p.y && p.y < s(n - i + 1)) return 1;
  std::size_t d = 0;
  for (const auto& st : m.summands) d += contains(st, p) ? 1 : 0;
  return d;
}

}  // namespace

TEST_SUITE("interleaving") {
  TEST_CASE("pattern_at") {
    auto [m, n] = ci_to_modules(CiInstance{2, PrimeField(2), {{1, 2}}, {{2, 1}, {1, 1}}});
    auto [P, Q] = pattern_at(m, n, Rational(1));
    CHECK(P == std::vector<Cell>{{1, 2}});
    CHECK(std::set<Cell>(Q.begin(), Q.end()) == std::set<Cell>{{1, 1}, {2, 1}});
    auto [P3, Q3] = pattern_at(m, n, Rational(3));
    CHECK(P3.empty());
    CHECK(Q3.empty());
    auto [Ph, Qh] = pattern_at(m, n, Rational(1, 2));
    CHECK(Ph.size() == 4);
    CHECK(Qh.size() == 4);

    StaircaseSum two{PrimeField(2), {normalize({pt(0, 0)}), normalize({pt(1, 1)})}};
    CHECK_THROWS_AS(pattern_at(two, single(0, 0), Rational(1)), std::invalid_argument);
  }

  TEST_CASE("gadget distance matrix") {
    testing::Rng rng(41);
    std::bernoulli_distribution pick(0.35);
    for (int it = 0; it < 30; ++it) {
      std::uint32_t n = 1 + it % 3;
      CiInstance inst{n, PrimeField(2), {}, {}};
      for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j) {
          if (pick(rng)) inst.P.emplace_back(i, j);
          if (pick(rng)) inst.Q.emplace_back(i, j);
        }
      auto [m, t] = ci_to_modules(inst);
      REQUIRE(m.summands.size() == n);
      std::set<Cell> P(inst.P.begin(), inst.P.end()), Q(inst.Q.begin(), inst.Q.end());
      auto ds = distance_matrix(m, t);
      auto back = distance_matrix(t, m);
      for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j) {
          CHECK(ds[i - 1][j - 1] == Rational(P.count({i, j}) ? 3 : 1));
          CHECK(back[j - 1][i - 1] == Rational(Q.count({j, i}) ? 3 : 1));
        }
      auto [P1, Q1] = pattern_at(m, t, Rational(1));
      CHECK(std::set<Cell>(P1.begin(), P1.end()) == P);
      CHECK(std::set<Cell>(Q1.begin(), Q1.end()) == Q);
    }
  }

  TEST_CASE("base gadget and a single forbidden entry") {
    auto [m, n] = ci_to_modules(CiInstance{1, PrimeField(2), {}, {}});
    CHECK(m.summands[0].size() == 5);
    CHECK(interleaving_distance_staircase(m, n).distance == Rational(1));
    auto [m1, n1] = ci_to_modules(CiInstance{1, PrimeField(2), {{1, 1}}, {}});
    CHECK(dshift_distance(m1.summands[0], n1.summands[0]) == Rational(3));
    CHECK(dshift_distance(n1.summands[0], m1.summands[0]) == Rational(1));
    CHECK(interleaving_distance_staircase(m1, n1).distance == Rational(3));
  }

  TEST_CASE("staircase decisions") {
    auto [ms, ns] = ci_to_modules(CiInstance{3, PrimeField(3), {{2, 2}, {3, 3}}, {{2, 3}, {3, 2}}});
    auto yes = decide_interleaving_staircase(ms, ns, Rational(1));
    REQUIRE(yes.status == SolveStatus::Solved);
    CHECK(verify_staircase_certificate(ms, ns, *yes.certificate));

    auto [mu, nu] = ci_to_modules(CiInstance{3, PrimeField(2), {{1, 1}, {1, 3}}, {{2, 1}}});
    CHECK(decide_interleaving_staircase(mu, nu, Rational(1)).status == SolveStatus::NoSolution);
    auto three = decide_interleaving_staircase(mu, nu, Rational(3));
    REQUIRE(three.status == SolveStatus::Solved);
    CHECK(verify_staircase_certificate(mu, nu, *three.certificate));

    auto self = decide_interleaving_staircase(ms, ms, Rational(0));
    REQUIRE(self.status == SolveStatus::Solved);
    CHECK(verify_staircase_certificate(ms, ms, *self.certificate));

    // tampered certificate
    auto bad = *yes.certificate;
    bad.f.matrix.set(0, 0, bad.f.matrix.at(0, 0) + 1);
    CHECK_FALSE(verify_staircase_certificate(ms, ns, bad));
  }

  TEST_CASE("distance on small sums") {
    CHECK(interleaving_distance_staircase(single(0, 0), single(2, 2)).distance == Rational(2));
    CHECK(interleaving_distance_staircase(single(0, 0), single(0, 0)).distance == Rational(0));
    StaircaseSum a{PrimeField(2), {normalize({pt(0, 0)}), normalize({pt(5, 5)})}};
    StaircaseSum b{PrimeField(2), {normalize({pt(5, 5)}), normalize({pt(1, 0)})}};
    CHECK(interleaving_distance_staircase(a, b).distance == Rational(1));
  }

  TEST_CASE("gadget dichotomy over every two-by-two pattern") {
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
      auto inst = pattern_instance(mask);
      auto [m, n] = ci_to_modules(inst);
      auto d = interleaving_distance_staircase(m, n);
      REQUIRE(d.status == SolveStatus::Solved);
      CHECK(d.distance == Rational(solvable(inst) ? 1 : 3));
      CHECK(verify_staircase_certificate(m, n, *d.certificate));
    }
  }

  TEST_CASE("presented decider examples") {
    auto a = single(0, 0), b = single(2, 2);
    auto pa = sum_presentation(a), pb = sum_presentation(b);
    CHECK(decide_interleaving_presented(pa, pb, Rational(1)).status == SolveStatus::NoSolution);
    auto yes = decide_interleaving_presented(pa, pb, Rational(2));
    REQUIRE(yes.status == SolveStatus::Solved);
    CHECK(verify_presented_certificate(pa, pb, *yes.certificate));
    CHECK(decide_interleaving_presented(pa, pa, Rational(0)).status == SolveStatus::Solved);

    auto [m, n] = ci_to_modules(CiInstance{1, PrimeField(2), {{1, 1}}, {}});
    auto pm = sum_presentation(m), pn = sum_presentation(n);
    CHECK(decide_interleaving_presented(pm, pn, Rational(1)).status == SolveStatus::NoSolution);
    CHECK(decide_interleaving_presented(pm, pn, Rational(3)).status == SolveStatus::Solved);
    CHECK(decide_interleaving_presented(pm, pn, Rational(3), 1).status == SolveStatus::BudgetExceeded);
  }

  TEST_CASE("presented and staircase deciders agree") {
    testing::Rng rng(43);
    std::uniform_int_distribution<int> count(1, 3);
    for (int it = 0; it < 30; ++it) {
      int k = count(rng);
      StaircaseSum m{PrimeField(2), {}}, n{PrimeField(2), {}};
      for (int s = 0; s < k; ++s) {
        m.summands.push_back(testing::random_staircase(rng, 3, -4, 4));
        n.summands.push_back(testing::random_staircase(rng, 3, -4, 4));
      }
      auto pm = sum_presentation(m), pn = sum_presentation(n);
      bool seenYes = false;
      for (const auto& eps : probe_eps(m, n)) {
        auto s = decide_interleaving_staircase(m, n, eps);
        auto p = decide_interleaving_presented(pm, pn, eps);
        CHECK(s.status == p.status);
        if (p.status == SolveStatus::Solved) CHECK(verify_presented_certificate(pm, pn, *p.certificate));
        seenYes = seenYes || s.status == SolveStatus::Solved;
      }
      CHECK(seenYes);
    }
  }

  TEST_CASE("feasibility is monotone in eps") {
    testing::Rng rng(44);
    for (int it = 0; it < 40; ++it) {
      auto m = testing::random_sum(rng, PrimeField(3), 3, 3, -4, 4);
      StaircaseSum n{PrimeField(3), {}};
      for (std::size_t s = 0; s < m.summands.size(); ++s) n.summands.push_back(testing::random_staircase(rng, 3, -4, 4));
      bool yes = false;
      for (const auto& eps : probe_eps(m, n)) {
        auto now = decide_interleaving_staircase(m, n, eps).status == SolveStatus::Solved;
        CHECK((!yes || now));
        yes = now;
      }
    }
  }

  TEST_CASE("wrap of two-summand gadgets") {
    for (std::uint32_t mask : {0u, 1u, 6u, 37u, 200u, 255u}) {
      auto inst = pattern_instance(mask);
      auto [m, n] = ci_to_modules(inst);
      auto x = wrap_anchor({&m, &n});
      auto wm = indecomposable_wrap(m, x), wn = indecomposable_wrap(n, x);
      CHECK(hom_space(wm, wm).size() == 1);
      CHECK(hom_space(wn, wn).size() == 1);
      std::vector<Rational> coords;
      for (int k = -3; k <= 3; ++k) coords.push_back(x + Rational(k));
      for (std::size_t i = 0; i <= 3; ++i) {
        coords.push_back(wrap_coordinate(x, 2, i));
        coords.push_back(wrap_coordinate(x, 2, i) + Rational(1, 7));
      }
      coords.push_back(x - Rational(40));
      for (const auto& px : coords)
        for (const auto& py : coords) {
          Point2 p{px, py};
          CHECK(eval_dim(wm, p) == wrap_expected(m, x, p));
          CHECK(eval_dim(wn, p) == wrap_expected(n, x, p));
        }
      for (const auto& eps : {Rational(1), Rational(3)})
        CHECK(decide_interleaving_presented(wm, wn, eps).status == decide_interleaving_staircase(m, n, eps).status);
    }
    auto [m, n] = ci_to_modules(pattern_instance(0));
    CHECK_THROWS_AS(indecomposable_wrap(m, Rational(0)), std::invalid_argument);
  }

  TEST_CASE("wrap coordinates") {
    CHECK(wrap_coordinate(Rational(10), 2, 0) == Rational(17));
    CHECK(wrap_coordinate(Rational(10), 2, 1) == Rational(52, 3));
    CHECK(wrap_coordinate(Rational(10), 2, 3) == Rational(18));
    CHECK_THROWS_AS(wrap_anchor({}), std::invalid_argument);
    auto s = single(4, -9);
    CHECK(wrap_anchor({&s}) == Rational(5));
  }
}
