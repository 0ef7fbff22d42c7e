#include "iforge/ci.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "bilinear.hpp"
#include "json.hpp"

namespace iforge {

namespace {

void check_cells(const std::vector<Cell>& cells, std::uint32_t rows, std::uint32_t cols, const char* name) {
  std::set<Cell> seen;
  for (const auto& c : cells) {
    if (c.first < 1 || c.first > rows || c.second < 1 || c.second > cols) {
      throw std::invalid_argument(std::string(name) + " entry (" + std::to_string(c.first) + "," +
                                  std::to_string(c.second) + ") out of range");
    }
    if (!seen.insert(c).second) {
      throw std::invalid_argument(std::string(name) + " entry (" + std::to_string(c.first) + "," +
                                  std::to_string(c.second) + ") repeated");
    }
  }
}

bool zeros_hold(const FieldMatrix& m, const std::vector<Cell>& cells) {
  return std::all_of(cells.begin(), cells.end(),
                     [&](const Cell& c) { return m.at(c.first - 1, c.second - 1) == 0; });
}

std::vector<bool> cell_mask(const std::vector<Cell>& cells, std::uint32_t rows, std::uint32_t cols) {
  std::vector<bool> mask(static_cast<std::size_t>(rows) * cols, false);
  for (const auto& c : cells) mask[(c.first - 1) * static_cast<std::size_t>(cols) + (c.second - 1)] = true;
  return mask;
}

}  // namespace

void CiInstance::validate() const {
  check_cells(P, n, n, "P");
  check_cells(Q, n, n, "Q");
}

void GciInstance::validate() const {
  check_cells(P, n, m, "P");
  check_cells(Q, m, n, "Q");
  check_cells(R, n, n, "R");
}

bool verify_ci(const CiInstance& inst, const CiSolution& sol) {
  if (sol.A.rows() != inst.n || sol.A.cols() != inst.n || sol.B.rows() != inst.n || sol.B.cols() != inst.n) {
    throw std::invalid_argument("verify_ci: solution dimensions do not match n");
  }
  if (sol.A.field() != inst.field || sol.B.field() != inst.field) {
    throw std::invalid_argument("verify_ci: solution field does not match instance");
  }
  return zeros_hold(sol.A, inst.P) && zeros_hold(sol.B, inst.Q) && mat_mul(sol.A, sol.B).is_identity();
}

bool verify_gci(const GciInstance& inst, const CiSolution& sol) {
  if (sol.A.rows() != inst.n || sol.A.cols() != inst.m || sol.B.rows() != inst.m || sol.B.cols() != inst.n) {
    throw std::invalid_argument("verify_gci: solution dimensions do not match (n,m)");
  }
  if (sol.A.field() != inst.field || sol.B.field() != inst.field) {
    throw std::invalid_argument("verify_gci: solution field does not match instance");
  }
  if (!zeros_hold(sol.A, inst.P) || !zeros_hold(sol.B, inst.Q)) return false;
  auto prod = mat_mul(sol.A, sol.B);
  return std::all_of(inst.R.begin(), inst.R.end(), [&](const Cell& c) {
    return prod.at(c.first - 1, c.second - 1) == (c.first == c.second ? 1u : 0u);
  });
}

namespace {

SolveResult solve_ci_propagate(const CiInstance& inst, std::uint64_t budget) {
  const auto n = inst.n;
  const auto& f = inst.field;
  auto pMask = cell_mask(inst.P, n, n);
  auto qMask = cell_mask(inst.Q, n, n);

  // Index t is padding when row t of A and column t of B are unconstrained.
  std::vector<std::size_t> kept, padding;
  for (std::uint32_t t = 0; t < n; ++t) {
    bool rowFree = true, colFree = true;
    for (std::uint32_t c = 0; c < n; ++c) {
      if (pMask[t * n + c]) rowFree = false;
      if (qMask[c * n + t]) colFree = false;
    }
    (rowFree && colFree ? padding : kept).push_back(t);
  }

  SolveResult result;
  if (kept.empty()) {
    result.status = SolveStatus::Solved;
    result.solution = CiSolution{FieldMatrix::identity(f, n), FieldMatrix::identity(f, n)};
    return result;
  }

  const auto k = kept.size();
  detail::RectProblem rect{f, k, n, {}, {}, {}};
  rect.xFree.assign(k * n, true);
  rect.yFree.assign(n * k, true);
  rect.equations.assign(k * k, true);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::uint32_t c = 0; c < n; ++c) {
      rect.xFree[r * n + c] = !pMask[kept[r] * n + c];
      rect.yFree[c * k + r] = !qMask[c * n + kept[r]];
    }
  }
  auto out = detail::solve_rect(rect, budget);
  result.nodes = out.nodes;
  result.status = out.status;
  if (out.status != SolveStatus::Solved) return result;

  const auto& X = out.x;
  const auto& Y = out.y;
  FieldMatrix A(f, n, n), B(f, n, n);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::uint32_t c = 0; c < n; ++c) {
      A.set(kept[r], c, X->at(r, c));
      B.set(c, kept[r], Y->at(c, r));
    }
  }
  if (!padding.empty()) {
    auto completion = complete_to_inverse(*X, *Y);
    for (std::size_t r = 0; r < padding.size(); ++r) {
      for (std::uint32_t c = 0; c < n; ++c) {
        A.set(padding[r], c, completion.mPrime.at(r, c));
        B.set(c, padding[r], completion.nPrime.at(c, r));
      }
    }
  }
  result.solution = CiSolution{std::move(A), std::move(B)};
  if (!verify_ci(inst, *result.solution)) throw std::logic_error("solve_ci produced an invalid solution");
  return result;
}

// Row-major enumeration of the free entries of A with a rank cut after each row.
class EnumerateA {
 public:
  EnumerateA(const CiInstance& inst, std::uint64_t budget)
      : inst_(inst), f_(inst.field), n_(inst.n), budget_(budget), a_(f_, n_, n_),
        pMask_(cell_mask(inst.P, n_, n_)), qMask_(cell_mask(inst.Q, n_, n_)) {}

  SolveResult run() {
    SolveResult r;
    bool found = n_ == 0 ? finish() : visit(0);
    r.nodes = nodes_;
    if (found) {
      r.status = SolveStatus::Solved;
      r.solution = CiSolution{a_, *b_};
    } else {
      r.status = exceeded_ ? SolveStatus::BudgetExceeded : SolveStatus::NoSolution;
    }
    return r;
  }

 private:
  bool visit(std::size_t pos) {
    if (pos == static_cast<std::size_t>(n_) * n_) return finish();
    const auto row = pos / n_;
    const auto col = pos % n_;
    const bool rowEnds = col + 1 == n_;
    const Element top = pMask_[pos] ? 1 : f_.p();
    for (Element v = 0; v < top; ++v) {
      if (++nodes_ > budget_) {
        exceeded_ = true;
        return false;
      }
      a_.set(row, col, v);
      if (rowEnds && !leading_rows_independent(row + 1)) continue;
      if (visit(pos + 1)) return true;
      if (exceeded_) return false;
    }
    a_.set(row, col, 0);
    return false;
  }
  bool leading_rows_independent(std::size_t rows) const {
    std::vector<std::size_t> ri(rows), ci(n_);
    for (std::size_t i = 0; i < rows; ++i) ri[i] = i;
    for (std::size_t j = 0; j < n_; ++j) ci[j] = j;
    return mat_rank(a_.select(ri, ci)) == rows;
  }
  bool finish() {
    auto inv = mat_inverse(a_);
    if (!inv) return false;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_) * n_; ++i) {
      if (qMask_[i] && inv->entries()[i] != 0) return false;
    }
    b_ = std::move(inv);
    return true;
  }

  const CiInstance& inst_;
  PrimeField f_;
  std::uint32_t n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  FieldMatrix a_;
  std::optional<FieldMatrix> b_;
  std::vector<bool> pMask_;
  std::vector<bool> qMask_;
};

}  // namespace

SolveResult solve_ci(const CiInstance& inst, std::uint64_t budget, CiAlgorithm algorithm) {
  inst.validate();
  if (algorithm == CiAlgorithm::EnumerateA) {
    auto r = EnumerateA(inst, budget).run();
    if (r.solution && !verify_ci(inst, *r.solution)) throw std::logic_error("enumeration produced an invalid solution");
    return r;
  }
  return solve_ci_propagate(inst, budget);
}

SolveResult solve_gci(const GciInstance& inst, std::uint64_t budget) {
  inst.validate();
  const auto& f = inst.field;
  detail::RectProblem rect{f, inst.n, inst.m, {}, {}, {}};
  auto pMask = cell_mask(inst.P, inst.n, inst.m);
  auto qMask = cell_mask(inst.Q, inst.m, inst.n);
  rect.xFree.resize(pMask.size());
  rect.yFree.resize(qMask.size());
  for (std::size_t i = 0; i < pMask.size(); ++i) rect.xFree[i] = !pMask[i];
  for (std::size_t i = 0; i < qMask.size(); ++i) rect.yFree[i] = !qMask[i];
  rect.equations = cell_mask(inst.R, inst.n, inst.n);
  auto out = detail::solve_rect(rect, budget);
  SolveResult result;
  result.status = out.status;
  result.nodes = out.nodes;
  if (out.status == SolveStatus::Solved) {
    result.solution = CiSolution{std::move(*out.x), std::move(*out.y)};
    if (!verify_gci(inst, *result.solution)) throw std::logic_error("solve_gci produced an invalid solution");
  }
  return result;
}

CiSolution GciEmbedding::restrict(const CiSolution& s) const {
  std::vector<std::size_t> nIdx(n), mIdx(m);
  for (std::size_t i = 0; i < n; ++i) nIdx[i] = i;
  for (std::size_t i = 0; i < m; ++i) mIdx[i] = i;
  return CiSolution{s.A.select(nIdx, mIdx), s.B.select(mIdx, nIdx)};
}

std::pair<CiInstance, GciEmbedding> gci_to_ci(const GciInstance& inst) {
  inst.validate();
  CiInstance ci;
  ci.n = inst.n + inst.m;
  ci.field = inst.field;
  ci.P = inst.P;
  for (std::uint32_t i = 1; i <= inst.n; ++i)
    for (std::uint32_t j = 1; j <= inst.n; ++j)
      if (i != j) ci.P.emplace_back(i, inst.m + j);
  ci.Q = inst.Q;
  for (const auto& [i, j] : inst.R) ci.Q.emplace_back(inst.m + i, j);
  std::sort(ci.P.begin(), ci.P.end());
  std::sort(ci.Q.begin(), ci.Q.end());
  return {std::move(ci), GciEmbedding{inst.n, inst.m}};
}

std::pair<GciInstance, SatDecoder> sat3_to_gci(const Cnf3& formula, const PrimeField& field) {
  formula.validate();
  const std::uint32_t nv = formula.numVars;
  const auto mc = static_cast<std::uint32_t>(formula.clauses.size());
  if (nv < 1) throw std::invalid_argument("sat3_to_gci needs at least one variable");
  const std::uint32_t rows = 2 * nv + 1 + mc;  // rows of A
  const std::uint32_t cols = 3 * nv + 1;       // cols of A
  std::vector<bool> aStar(static_cast<std::size_t>(rows) * cols, false);
  std::vector<bool> bStar(static_cast<std::size_t>(cols) * rows, false);
  auto starA = [&](std::uint32_t i, std::uint32_t j) { aStar[(i - 1) * static_cast<std::size_t>(cols) + (j - 1)] = true; };
  auto starB = [&](std::uint32_t i, std::uint32_t j) { bStar[(i - 1) * static_cast<std::size_t>(rows) + (j - 1)] = true; };

  starA(1, cols);
  starB(cols, 1);
  for (std::uint32_t k = 0; k < nv; ++k) {
    starA(1, 3 * k + 1);
    starA(1, 3 * k + 2);
    starA(2 + 2 * k, 3 * k + 1);
    starA(2 + 2 * k, 3 * k + 3);
    starA(3 + 2 * k, 3 * k + 2);
    starA(3 + 2 * k, 3 * k + 3);
    starB(3 * k + 1, 2 + 2 * k);
    starB(3 * k + 3, 2 + 2 * k);
    starB(3 * k + 2, 3 + 2 * k);
    starB(3 * k + 3, 3 + 2 * k);
  }
  for (std::uint32_t c = 0; c < mc; ++c) {
    const std::uint32_t idx = 2 * nv + 2 + c;
    starA(idx, cols);
    starB(cols, idx);
    for (const auto& lit : formula.clauses[c]) starB(3 * lit.var + (lit.negated ? 2 : 1), idx);
  }

  GciInstance g;
  g.n = rows;
  g.m = cols;
  g.field = field;
  for (std::uint32_t i = 1; i <= rows; ++i)
    for (std::uint32_t j = 1; j <= cols; ++j)
      if (!aStar[(i - 1) * static_cast<std::size_t>(cols) + (j - 1)]) g.P.emplace_back(i, j);
  for (std::uint32_t i = 1; i <= cols; ++i)
    for (std::uint32_t j = 1; j <= rows; ++j)
      if (!bStar[(i - 1) * static_cast<std::size_t>(rows) + (j - 1)]) g.Q.emplace_back(i, j);
  const std::uint32_t core = 2 * nv + 1;
  for (std::uint32_t i = 1; i <= rows; ++i) {
    for (std::uint32_t j = 1; j <= rows; ++j) {
      bool fixed = (i <= core && j <= core) || i == 1 || i == j;
      if (fixed) g.R.emplace_back(i, j);
    }
  }
  return {std::move(g), SatDecoder{nv, mc}};
}

Assignment extract_assignment(const Cnf3& f, const GciInstance& inst, const CiSolution& sol) {
  if (!verify_gci(inst, sol)) throw std::invalid_argument("extract_assignment: solution does not verify");
  if (inst.m != 3 * f.numVars + 1) throw std::invalid_argument("extract_assignment: instance shape does not match formula");
  Assignment a(f.numVars);
  for (std::uint32_t i = 0; i < f.numVars; ++i) a[i] = sol.A.at(0, 3 * i) != 0;
  return a;
}

CiSolution CiCnf::decode(const Model& model) const {
  PrimeField f2(2);
  FieldMatrix A(f2, n, n), B(f2, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      A.set(i, j, model.at(aVar[i * n + j]) ? 1 : 0);
      B.set(i, j, model.at(bVar[i * n + j]) ? 1 : 0);
    }
  }
  return {std::move(A), std::move(B)};
}

CiCnf ci_to_cnf(const CiInstance& inst) {
  inst.validate();
  if (inst.field.p() != 2) throw std::invalid_argument("ci_to_cnf requires GF(2)");
  const auto n = inst.n;
  CiCnf out;
  out.n = n;
  auto& cnf = out.cnf;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i) out.aVar.push_back(cnf.new_var());
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * n; ++i) out.bVar.push_back(cnf.new_var());
  auto lit = [](std::uint32_t v) { return static_cast<std::int32_t>(v); };
  for (const auto& [i, j] : inst.P) cnf.add({-lit(out.aVar[(i - 1) * n + (j - 1)])});
  for (const auto& [i, j] : inst.Q) cnf.add({-lit(out.bVar[(i - 1) * n + (j - 1)])});

  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      // t_k <-> a_ik & b_kj
      std::vector<std::int32_t> products;
      for (std::uint32_t k = 0; k < n; ++k) {
        auto a = lit(out.aVar[i * n + k]);
        auto b = lit(out.bVar[k * n + j]);
        auto t = lit(cnf.new_var());
        cnf.add({-t, a});
        cnf.add({-t, b});
        cnf.add({t, -a, -b});
        products.push_back(t);
      }
      // parity chain s_k <-> s_{k-1} xor t_k
      auto acc = products[0];
      for (std::size_t k = 1; k < products.size(); ++k) {
        auto t = products[k];
        auto s = lit(cnf.new_var());
        cnf.add({-s, acc, t});
        cnf.add({-s, -acc, -t});
        cnf.add({s, -acc, t});
        cnf.add({s, acc, -t});
        acc = s;
      }
      cnf.add({i == j ? acc : -acc});
    }
  }
  return out;
}

namespace {

using nlohmann::json;

json cells_json(const std::vector<Cell>& cells) {
  json arr = json::array();
  for (const auto& [i, j] : cells) arr.push_back({i, j});
  return arr;
}

std::vector<Cell> cells_from(const json& j, const char* key) {
  std::vector<Cell> out;
  if (!j.contains(key)) return out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument(std::string(key) + " entries must be [i,j] pairs");
    auto a = e[0].get<std::int64_t>();
    auto b = e[1].get<std::int64_t>();
    if (a < 1 || b < 1) throw std::invalid_argument(std::string(key) + " indices are 1-based");
    out.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
  }
  return out;
}

}  // namespace

std::string ci_to_json(const CiInstance& inst) {
  json j{{"kind", "ci"}, {"n", inst.n}, {"p", inst.field.p()}, {"P", cells_json(inst.P)}, {"Q", cells_json(inst.Q)}};
  return j.dump();
}

std::string gci_to_json(const GciInstance& inst) {
  json j{{"kind", "gci"},       {"n", inst.n},           {"m", inst.m},          {"p", inst.field.p()},
         {"P", cells_json(inst.P)}, {"Q", cells_json(inst.Q)}, {"R", cells_json(inst.R)}};
  return j.dump();
}

ParsedInstance parse_instance_json(const std::string& text, std::uint32_t fieldOverride) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
  ParsedInstance out;
  try {
    out.kind = j.value("kind", std::string("ci"));
    auto p = fieldOverride != 0 ? fieldOverride : j.value("p", 2u);
    PrimeField field(p);
    auto n = j.at("n").get<std::uint32_t>();
    if (out.kind == "ci") {
      CiInstance ci{n, field, cells_from(j, "P"), cells_from(j, "Q")};
      ci.validate();
      GciInstance g{n, n, field, ci.P, ci.Q, {}};
      for (std::uint32_t a = 1; a <= n; ++a)
        for (std::uint32_t b = 1; b <= n; ++b) g.R.emplace_back(a, b);
      out.ci = std::move(ci);
      out.gci = std::move(g);
    } else if (out.kind == "gci") {
      GciInstance g{n, j.at("m").get<std::uint32_t>(), field, cells_from(j, "P"), cells_from(j, "Q"), cells_from(j, "R")};
      g.validate();
      out.gci = std::move(g);
    } else {
      throw std::invalid_argument("instance JSON: unknown kind '" + out.kind + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("instance JSON: ") + e.what());
  }
  return out;
}

}  // namespace iforge
