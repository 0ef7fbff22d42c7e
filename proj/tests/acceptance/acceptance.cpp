// Acceptance checks. Each criterion prints one PASS/FAIL line with its wall time and limit.
// Usage: iforge_acceptance [criterion-number ...]   (no arguments runs all of them)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iforge/ci.hpp"
#include "iforge/cnf.hpp"
#include "iforge/field.hpp"
#include "iforge/interleaving.hpp"
#include "iforge/onesided.hpp"
#include "iforge/presentation.hpp"
#include "iforge/staircase.hpp"
#include "oracles.hpp"

using namespace iforge;

namespace {

// Collects failures; a criterion passes when nothing was recorded.
class Report {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  [[nodiscard]] bool ok() const { return failed_ == 0; }
  [[nodiscard]] std::string summary() const {
    std::ostringstream os;
    os << checks_ << " checks";
    if (failed_ > 0) {
      os << ", " << failed_ << " failed:";
      for (const auto& f : failures_) os << " [" << f << "]";
    }
    return os.str();
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

bool solved(SolveStatus s) { return s == SolveStatus::Solved; }

CiInstance pattern_instance(std::uint32_t mask) {
  CiInstance inst{2, PrimeField(2), {}, {}};
  for (std::uint32_t b = 0; b < 4; ++b) {
    if ((mask >> b) & 1u) inst.P.emplace_back(b / 2 + 1, b % 2 + 1);
    if ((mask >> (b + 4)) & 1u) inst.Q.emplace_back(b / 2 + 1, b % 2 + 1);
  }
  return inst;
}

std::string mask_label(std::uint32_t mask) { return "mask " + std::to_string(mask); }

FieldMatrix rows_of(std::uint32_t p, std::vector<std::vector<std::int64_t>> r) {
  return FieldMatrix::from_rows(PrimeField(p), r);
}

// ---------------------------------------------------------------------------------------------

void worked_examples(Report& r) {
  CiInstance good{3, PrimeField(3), {{2, 2}, {3, 3}}, {{2, 3}, {3, 2}}};
  CiSolution sol{rows_of(3, {{1, 1, 1}, {1, 0, 1}, {1, 1, 0}}), rows_of(3, {{-1, 1, 1}, {1, -1, 0}, {1, 0, -1}})};
  r.check(verify_ci(good, sol), "given matrices verify over GF(3)");
  auto found = solve_ci(good);
  r.check(solved(found.status) && verify_ci(good, *found.solution), "solver finds a verified solution");
  for (std::uint32_t p : {2u, 3u}) {
    CiInstance bad{3, PrimeField(p), {{1, 1}, {1, 3}}, {{2, 1}}};
    r.check(solve_ci(bad).status == SolveStatus::NoSolution, "unsolvable over GF(" + std::to_string(p) + ")");
    r.check(solve_ci(bad, kDefaultBudget, CiAlgorithm::EnumerateA).status == SolveStatus::NoSolution,
            "unsolvable by enumeration over GF(" + std::to_string(p) + ")");
    r.check(!testing::brute_force_ci(bad).has_value(), "brute force agrees over GF(" + std::to_string(p) + ")");
  }
}

// M random of full row rank, N a uniformly random right inverse of M.
void inverse_completion(Report& r) {
  testing::Rng rng(20240601);
  int made = 0;
  for (std::uint32_t p : {2u, 3u}) {
    PrimeField f(p);
    for (int t = 0; t < 100; ++t) {
      std::size_t k = 1 + t % 3;
      std::size_t big = k + 1 + (t / 3) % (5 - k);
      FieldMatrix m(f, k, big);
      do m = testing::random_matrix(rng, f, k, big);
      while (mat_rank(m) != k);
      auto kernel = nullspace(m);  // big x (big - k)
      FieldMatrix n(f, big, k);
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<Element> e(k, 0);
        e[c] = 1;
        auto x = solve_linear(m, e);
        if (!x) {
          r.check(false, "right inverse column missing");
          continue;
        }
        auto mix = testing::random_matrix(rng, f, kernel.cols(), 1);
        auto shiftCol = mat_mul(kernel, mix);
        for (std::size_t i = 0; i < big; ++i) n.set(i, c, f.add((*x)[i], shiftCol.at(i, 0)));
      }
      if (!mat_mul(m, n).is_identity()) {
        r.check(false, "sampled pair is not a left/right inverse pair");
        continue;
      }
      auto c = complete_to_inverse(m, n);
      auto product = mat_mul(vconcat(m, c.mPrime), hconcat(n, c.nPrime));
      r.check(product.is_identity(), "completion is not the block identity (p=" + std::to_string(p) + ")");
      ++made;
    }
  }
  r.check(made == 200, "expected 200 pairs");
}

void sat_through_ci(Report& r) {
  testing::Rng rng(77);
  std::vector<Cnf3> family;
  for (int t = 0; t < 100; ++t) family.push_back(testing::random_cnf3(rng, 3 + t % 2, 1 + t % 4));
  Cnf3 unsat;
  unsat.numVars = 3;
  for (std::uint32_t s = 0; s < 8; ++s)
    unsat.clauses.push_back({Literal{0, (s & 1u) != 0}, Literal{1, (s & 2u) != 0}, Literal{2, (s & 4u) != 0}});
  family.push_back(unsat);

  for (std::uint32_t p : {2u, 3u}) {
    PrimeField field(p);
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto& f = family[k];
      bool sat = brute_force_sat(f).has_value();
      r.check(sat == testing::satisfiable_by_enumeration(f), "library brute force disagrees with enumeration");
      auto [gci, decoder] = sat3_to_gci(f, field);
      auto [ci, embedding] = gci_to_ci(gci);
      auto res = solve_ci(ci);
      std::string label = "formula " + std::to_string(k) + " over GF(" + std::to_string(p) + ")";
      r.check(res.status != SolveStatus::BudgetExceeded, label + ": budget");
      r.check(solved(res.status) == sat, label + ": CI answer differs from SAT");
      if (res.solution) {
        auto a = extract_assignment(f, gci, embedding.restrict(*res.solution));
        r.check(eval_assignment(f, a), label + ": extracted assignment fails");
      }
    }
  }
}

void gadget_distance_matrix(Report& r) {
  testing::Rng rng(404);
  std::uniform_real_distribution<double> density(0.0, 0.7);
  for (int t = 0; t < 50; ++t) {
    std::uint32_t n = 1 + t % 3;
    std::bernoulli_distribution pick(density(rng));
    CiInstance inst{n, PrimeField(2), {}, {}};
    for (std::uint32_t i = 1; i <= n; ++i)
      for (std::uint32_t j = 1; j <= n; ++j) {
        if (pick(rng)) inst.P.emplace_back(i, j);
        if (pick(rng)) inst.Q.emplace_back(i, j);
      }
    auto [m, nn] = ci_to_modules(inst);
    std::set<Cell> P(inst.P.begin(), inst.P.end()), Q(inst.Q.begin(), inst.Q.end());
    for (std::uint32_t i = 1; i <= n; ++i)
      for (std::uint32_t j = 1; j <= n; ++j) {
        auto st = dshift_distance(m.summands[i - 1], nn.summands[j - 1]);
        auto ts = dshift_distance(nn.summands[j - 1], m.summands[i - 1]);
        r.check(st == Rational(P.count({i, j}) ? 3 : 1), "d_s(S_i,T_j) wrong in instance " + std::to_string(t));
        r.check(ts == Rational(Q.count({j, i}) ? 3 : 1), "d_s(T_j,S_i) wrong in instance " + std::to_string(t));
      }
  }
}

void gadget_dichotomy(Report& r) {
  int ones = 0, threes = 0;
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    auto inst = pattern_instance(mask);
    auto [m, n] = ci_to_modules(inst);
    auto d = interleaving_distance_staircase(m, n);
    bool ci = solved(solve_ci(inst).status);
    r.check(solved(d.status), mask_label(mask) + ": no distance");
    r.check(d.distance == Rational(1) || d.distance == Rational(3), mask_label(mask) + ": distance " + d.distance.to_string());
    r.check((d.distance == Rational(1)) == ci, mask_label(mask) + ": distance disagrees with CI");
    if (d.certificate) r.check(verify_staircase_certificate(m, n, *d.certificate), mask_label(mask) + ": certificate");
    (d.distance == Rational(1) ? ones : threes)++;
  }
  r.check(ones > 0 && threes > 0, "both outcomes occur");
}

void presented_oracle_equivalence(Report& r) {
  testing::Rng rng(606);
  std::uniform_int_distribution<int> count(1, 3);
  PrimeField f(2);
  for (int t = 0; t < 100; ++t) {
    int k = count(rng);
    StaircaseSum m{f, {}}, n{f, {}};
    for (int s = 0; s < k; ++s) {
      m.summands.push_back(testing::random_staircase(rng, 3, -4, 4));
      n.summands.push_back(testing::random_staircase(rng, 3, -4, 4));
    }
    auto pm = sum_presentation(m), pn = sum_presentation(n);
    auto c = candidate_eps(m, n);
    std::vector<Rational> probes = c;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) probes.push_back((c[i] + c[i + 1]) / Rational(2));
    probes.push_back(c.back() + Rational(1, 2));
    for (const auto& eps : probes) {
      auto a = decide_interleaving_staircase(m, n, eps);
      auto b = decide_interleaving_presented(pm, pn, eps);
      std::string label = "pair " + std::to_string(t) + " eps " + eps.to_string();
      r.check(a.status != SolveStatus::BudgetExceeded && b.status != SolveStatus::BudgetExceeded, label + ": budget");
      r.check(a.status == b.status, label + ": deciders disagree");
      if (b.certificate) r.check(verify_presented_certificate(pm, pn, *b.certificate), label + ": certificate");
    }
  }
}

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

void indecomposable_wraps(Report& r) {
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    auto [m, n] = ci_to_modules(pattern_instance(mask));
    auto x = wrap_anchor({&m, &n});
    auto wm = indecomposable_wrap(m, x), wn = indecomposable_wrap(n, x);
    r.check(hom_space(wm, wm).size() == 1, mask_label(mask) + ": End(M^) not one-dimensional");
    r.check(hom_space(wn, wn).size() == 1, mask_label(mask) + ": End(N^) not one-dimensional");

    std::vector<Rational> coords{x - Rational(20), x - Rational(6), x - Rational(1)};
    for (std::size_t i = 0; i <= 3; ++i) {
      coords.push_back(wrap_coordinate(x, 2, i));
      coords.push_back(wrap_coordinate(x, 2, i) + Rational(1, 7));
    }
    coords.push_back(x + Rational(9));
    std::size_t points = 0;
    for (const auto& px : coords)
      for (const auto& py : coords) {
        Point2 p{px, py};
        r.check(eval_dim(wm, p) == wrap_expected(m, x, p), mask_label(mask) + ": M^ dim at " + p.to_string());
        r.check(eval_dim(wn, p) == wrap_expected(n, x, p), mask_label(mask) + ": N^ dim at " + p.to_string());
        ++points;
      }
    r.check(points >= 50, "grid too small");
    for (const auto& eps : {Rational(1), Rational(3)}) {
      auto a = decide_interleaving_presented(wm, wn, eps);
      auto b = decide_interleaving_staircase(m, n, eps);
      r.check(a.status == b.status, mask_label(mask) + ": wrap decision differs at eps " + eps.to_string());
    }
  }
}

void one_sided(Report& r) {
  // trivial-kernel/cokernel morphism to the 1-shift versus 1-interleaving
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    auto [m, n] = ci_to_modules(pattern_instance(mask));
    bool expected = solved(decide_interleaving_staircase(m, n, Rational(1)).status);
    auto n1 = shift(n, Rational(1));
    for (const auto& s : {Bound(Rational(0)), Bound(Rational(1)), Bound::infinity()}) {
      auto d = exists_st_trivial_morphism(m, n1, {s, Bound(Rational(2))});
      r.check(d.status != SolveStatus::BudgetExceeded, mask_label(mask) + ": budget");
      r.check(solved(d.status) == expected, mask_label(mask) + ": s=" + s.to_string() + " disagrees");
      if (d.morphism)
        r.check(staircase_kernel_trivial(m, n1, d.morphism->matrix, Bound(Rational(0))),
                mask_label(mask) + ": found morphism not injective");
    }
  }

  // duality between injections with trivial cokernel and surjections with trivial kernel
  testing::Rng rng(808);
  PrimeField f2(2);
  int injective = 0;
  for (int t = 0; t < 50; ++t) {
    auto [m, n] = testing::random_nested_pair(rng, f2);
    auto a = testing::random_allowed_matrix(rng, m, n);
    Rational eps(t % 5, 2);
    auto primalMorphism = morphism_from_matrix(m, n, {a});
    bool inj = kernel_trivial(primalMorphism, Bound(Rational(0)));
    bool primal = inj && cokernel_trivial(primalMorphism, Bound(eps));
    auto d = dual_morphism(m, n, {a}, default_zcut({&m, &n}));
    bool dual = cokernel_trivial(d, Bound(Rational(0))) && kernel_trivial(d, Bound(eps));
    r.check(primal == dual, "duality pair " + std::to_string(t));
    injective += inj ? 1 : 0;
  }
  r.check(injective >= 5, "too few injective samples");

  // surjection gadget versus satisfiability, checked against full matrix enumeration
  std::vector<Cnf3> family;
  for (int t = 0; t < 40; ++t) family.push_back(testing::random_cnf3(rng, 3, 1 + t % 3));
  Cnf3 unsat;
  unsat.numVars = 3;
  for (std::uint32_t s = 0; s < 8; ++s)
    unsat.clauses.push_back({Literal{0, (s & 1u) != 0}, Literal{1, (s & 2u) != 0}, Literal{2, (s & 4u) != 0}});
  family.push_back(unsat);
  auto almost = unsat;
  almost.clauses.pop_back();
  family.push_back(almost);
  for (std::size_t k = 0; k < family.size(); ++k) {
    const auto& f = family[k];
    auto g = sat3_to_surjection(f, f2);
    bool sat = testing::satisfiable_by_enumeration(f);
    bool enumerated = testing::surjection_by_enumeration(g.M, g.N);
    auto d = exists_surjection(g.M, g.N);
    std::string label = "formula " + std::to_string(k);
    r.check(d.status != SolveStatus::BudgetExceeded, label + ": budget");
    r.check(enumerated == sat, label + ": enumeration disagrees with SAT");
    r.check(solved(d.status) == sat, label + ": search disagrees with SAT");
    if (d.morphism) r.check(eval_assignment(f, surjection_assignment(f, surjection_normal_form(d.morphism->matrix))),
                            label + ": decoded assignment fails");
  }
}

void shift_distance_closed_form(Report& r) {
  testing::Rng rng(909);
  for (int t = 0; t < 500; ++t) {
    auto s = testing::random_staircase(rng, 4, -6, 6);
    auto u = testing::random_staircase(rng, 4, -6, 6);
    r.check(dshift_distance(s, u) == testing::shift_distance_by_membership(s, u), "pair " + std::to_string(t));
  }
}

struct Criterion {
  int id;
  const char* name;
  double limitSeconds;
  std::function<void(Report&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "worked CI examples", 1, worked_examples},
      {2, "inverse completion on 200 random pairs", 5, inverse_completion},
      {3, "3SAT through GCI and CI agrees with brute force", 60, sat_through_ci},
      {4, "gadget shift-distance matrix on 50 patterns", 10, gadget_distance_matrix},
      {5, "gadget distance is 1 or 3 on all 256 patterns", 120, gadget_dichotomy},
      {6, "staircase and presented deciders agree on 100 pairs", 120, presented_oracle_equivalence},
      {7, "indecomposable wraps of all 256 gadgets", 120, indecomposable_wraps},
      {8, "one-sided morphisms, duality, surjection gadget", 180, one_sided},
      {9, "shift distance closed form on 500 pairs", 5, shift_distance_closed_form},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Report report;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(report);
    } catch (const std::exception& e) {
      report.check(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool inTime = secs <= c.limitSeconds;
    bool pass = report.ok() && inTime;
    failures += pass ? 0 : 1;
    std::printf("%s  criterion %d: %s  (%.3f s, limit %.0f s)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limitSeconds, report.summary().c_str(), inTime ? "" : "  [over time limit]");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
