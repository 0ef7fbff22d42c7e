#include <stdexcept>

#include "doctest.h"
#include "iforge/cnf.hpp"
#include "oracles.hpp"

using namespace iforge;

namespace {

Cnf3 all_sign_patterns() {
  Cnf3 f;
  f.numVars = 3;
  for (int s = 0; s < 8; ++s) {
    f.clauses.push_back({Literal{0, (s & 1) != 0}, Literal{1, (s & 2) != 0}, Literal{2, (s & 4) != 0}});
  }
  return f;
}

}  // namespace

TEST_SUITE("satcore") {
  TEST_CASE("parse_dimacs reads the two-clause example") {
    auto f = parse_dimacs("p cnf 3 2\n1 2 -3 0\n-1 2 3 0");
    REQUIRE(f.numVars == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0][0] == Literal{0, false});
    CHECK(f.clauses[0][1] == Literal{1, false});
    CHECK(f.clauses[0][2] == Literal{2, true});
    CHECK(f.clauses[1][0] == Literal{0, true});
  }

  TEST_CASE("parse_dimacs edge cases") {
    auto empty = parse_dimacs("p cnf 1 0");
    CHECK(empty.numVars == 1);
    CHECK(empty.clauses.empty());
    auto withComments = parse_dimacs("c hello\np cnf 3 1\n1 2\n3 0\n");
    CHECK(withComments.comments.size() == 1);
    CHECK(withComments.clauses.size() == 1);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2 4 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 1 2 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimacs("p dnf 3 1\n1 2 3 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimacs("1 2 3 0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 2\n1 2 3 0"), std::invalid_argument);
  }

  TEST_CASE("emit/parse round trip") {
    testing::Rng rng(5);
    for (int t = 0; t < 30; ++t) {
      auto f = testing::random_cnf3(rng, 3 + t % 4, t % 6);
      auto g = parse_dimacs(emit_dimacs(f));
      CHECK(g.numVars == f.numVars);
      CHECK(g.clauses == f.clauses);
      CHECK(emit_dimacs(g) == emit_dimacs(f));
    }
    CHECK(emit_dimacs(parse_dimacs("c x\np cnf 3 1\n1 -2 3 0\n")) == "p cnf 3 1\n1 -2 3 0\n");
  }

  TEST_CASE("eval_assignment") {
    auto f = parse_dimacs("p cnf 3 2\n1 2 -3 0\n-1 2 3 0");
    CHECK(eval_assignment(f, {true, true, false}));
    CHECK_FALSE(eval_assignment(f, {true, false, false}));
    Cnf3 none;
    none.numVars = 2;
    CHECK(eval_assignment(none, {false, true}));
    auto padded = parse_dimacs("p cnf 3 2\n1 2 3 0\n-1 2 3 0");
    CHECK_FALSE(eval_assignment(padded, {false, false, false}));
    CHECK_THROWS_AS(eval_assignment(f, {true}), std::invalid_argument);
  }

  TEST_CASE("brute_force_sat examples") {
    auto f = parse_dimacs("p cnf 3 2\n1 2 -3 0\n-1 2 3 0");
    auto a = brute_force_sat(f);
    REQUIRE(a.has_value());
    CHECK(eval_assignment(f, *a));
    Cnf3 empty;
    empty.numVars = 4;
    CHECK(*brute_force_sat(empty) == Assignment(4, false));
    CHECK_FALSE(brute_force_sat(all_sign_patterns()).has_value());
    Cnf3 big;
    big.numVars = 26;
    CHECK_THROWS_AS((void)brute_force_sat(big), std::invalid_argument);
  }

  TEST_CASE("brute_force_sat agrees with plain enumeration") {
    testing::Rng rng(99);
    for (int t = 0; t < 200; ++t) {
      auto f = testing::random_cnf3(rng, 3 + t % 8, 1 + t % 40);
      auto a = brute_force_sat(f);
      CHECK(a.has_value() == testing::satisfiable_by_enumeration(f));
      if (a) CHECK(eval_assignment(f, *a));
    }
  }

  TEST_CASE("dpll agrees with brute force on random 3CNF") {
    testing::Rng rng(123);
    for (int t = 0; t < 200; ++t) {
      auto f3 = testing::random_cnf3(rng, 3 + t % 7, 1 + t % 35);
      Cnf g = parse_dimacs_general(emit_dimacs(f3));
      auto model = dpll_solve(g);
      CHECK(model.has_value() == brute_force_sat(f3).has_value());
      if (model) {
        Assignment a(f3.numVars);
        for (std::uint32_t v = 0; v < f3.numVars; ++v) a[v] = (*model)[v + 1];
        CHECK(eval_assignment(f3, a));
      }
    }
  }

  TEST_CASE("projected model counting") {
    Cnf f;
    f.numVars = 2;
    f.add({1, 2});
    CHECK(count_projected_models(f, {1, 2}, 100) == 3);
    f.add({-1});
    CHECK(count_projected_models(f, {1, 2}, 100) == 1);
    Cnf bad;
    bad.numVars = 1;
    bad.add({1});
    bad.add({-1});
    CHECK_FALSE(dpll_solve(bad).has_value());
  }
}
