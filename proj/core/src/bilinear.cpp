#include "bilinear.hpp"

#include <bit>
#include <stdexcept>

namespace iforge::detail {

namespace {

__extension__ typedef unsigned __int128 Mask;

enum class Entry : std::uint8_t { Zero, Var, One, Slack };

int popcount(Mask m) {
  return std::popcount(static_cast<std::uint64_t>(m)) + std::popcount(static_cast<std::uint64_t>(m >> 64));
}
int lowest(Mask m) {
  auto lo = static_cast<std::uint64_t>(m);
  if (lo != 0) return std::countr_zero(lo);
  return 64 + std::countr_zero(static_cast<std::uint64_t>(m >> 64));
}
Mask bit(Element v) { return Mask{1} << v; }

// Entry states of X and Y after the elimination rules.
struct Reduced {
  std::vector<Entry> x;  // k*N
  std::vector<Entry> y;  // N*k
  std::vector<bool> live;
};

// Drops entries that meet no live equation, fixes lone entries of a column of X (or row of Y)
// to 1 and turns their partners into slack for the equations they alone control.
void reduce(const RectProblem& pr, Reduced& st) {
  const auto k = pr.k;
  const auto N = pr.N;
  auto X = [&](std::size_t i, std::size_t c) -> Entry& { return st.x[i * N + c]; };
  auto Y = [&](std::size_t c, std::size_t j) -> Entry& { return st.y[c * k + j]; };
  auto nonzero = [](Entry e) { return e == Entry::Var || e == Entry::One; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t c = 0; c < N; ++c) {
        if (X(i, c) != Entry::Var) continue;
        bool used = false;
        for (std::size_t j = 0; j < k && !used; ++j) used = st.live[i * k + j] && nonzero(Y(c, j));
        if (!used) {
          X(i, c) = Entry::Zero;
          changed = true;
        }
      }
    }
    for (std::size_t c = 0; c < N; ++c) {
      for (std::size_t j = 0; j < k; ++j) {
        if (Y(c, j) != Entry::Var) continue;
        bool used = false;
        for (std::size_t i = 0; i < k && !used; ++i) used = st.live[i * k + j] && nonzero(X(i, c));
        if (!used) {
          Y(c, j) = Entry::Zero;
          changed = true;
        }
      }
    }
    for (std::size_t c = 0; c < N; ++c) {
      // column c of X: exactly one Var, rest Zero; row c of Y: only Var/Zero
      std::size_t vars = 0, which = 0;
      bool clean = true;
      for (std::size_t i = 0; i < k; ++i) {
        if (X(i, c) == Entry::Var) {
          ++vars;
          which = i;
        } else if (X(i, c) != Entry::Zero) {
          clean = false;
        }
      }
      for (std::size_t j = 0; j < k; ++j)
        if (Y(c, j) == Entry::One || Y(c, j) == Entry::Slack) clean = false;
      if (clean && vars == 1) {
        X(which, c) = Entry::One;
        for (std::size_t j = 0; j < k; ++j) {
          if (Y(c, j) != Entry::Var) continue;
          if (st.live[which * k + j]) {
            Y(c, j) = Entry::Slack;
            st.live[which * k + j] = false;
          } else {
            Y(c, j) = Entry::Zero;
          }
        }
        changed = true;
      }
    }
    for (std::size_t c = 0; c < N; ++c) {
      std::size_t vars = 0, which = 0;
      bool clean = true;
      for (std::size_t j = 0; j < k; ++j) {
        if (Y(c, j) == Entry::Var) {
          ++vars;
          which = j;
        } else if (Y(c, j) != Entry::Zero) {
          clean = false;
        }
      }
      for (std::size_t i = 0; i < k; ++i)
        if (X(i, c) == Entry::One || X(i, c) == Entry::Slack) clean = false;
      if (clean && vars == 1) {
        Y(c, which) = Entry::One;
        for (std::size_t i = 0; i < k; ++i) {
          if (X(i, c) != Entry::Var) continue;
          if (st.live[i * k + which]) {
            X(i, c) = Entry::Slack;
            st.live[i * k + which] = false;
          } else {
            X(i, c) = Entry::Zero;
          }
        }
        changed = true;
      }
    }
  }
}

struct Term {
  int a;  // variable index, or -1 for the constant 1
  int b;
};

struct Equation {
  std::vector<Term> terms;
  Element rhs;
};

class Search {
 public:
  Search(const PrimeField& f, std::size_t numVars, std::vector<Equation> eqs, std::vector<std::pair<int, int>> ends,
         std::size_t numNodes, const std::vector<std::pair<int, int>>& fixedEdges, std::uint64_t budget)
      : f_(f), eqs_(std::move(eqs)), ends_(std::move(ends)), budget_(budget),
        dom_(numVars, (Mask{1} << f.p()) - 1), varEqs_(numVars),
        parent_(numNodes), size_(numNodes, 1), queued_(eqs_.size(), false) {
    for (std::size_t e = 0; e < eqs_.size(); ++e) {
      for (const auto& t : eqs_[e].terms) {
        if (t.a >= 0) varEqs_[t.a].push_back(static_cast<int>(e));
        if (t.b >= 0) varEqs_[t.b].push_back(static_cast<int>(e));
      }
    }
    for (std::size_t i = 0; i < numNodes; ++i) parent_[i] = static_cast<int>(i);
    for (const auto& [u, v] : fixedEdges) unite(u, v);
  }

  bool run() {
    for (std::size_t e = 0; e < eqs_.size(); ++e) enqueue(static_cast<int>(e));
    if (!propagate()) return false;
    return dfs();
  }

  [[nodiscard]] bool exceeded() const { return exceeded_; }
  [[nodiscard]] std::uint64_t nodes() const { return nodes_; }
  [[nodiscard]] Element value(int v) const { return static_cast<Element>(lowest(dom_[v])); }

 private:
  bool assigned(int v) const { return popcount(dom_[v]) == 1; }

  int find(int u) const {
    while (parent_[u] != u) u = parent_[u];
    return u;
  }
  void unite(int u, int v) {
    u = find(u);
    v = find(v);
    if (u == v) return;
    if (size_[u] < size_[v]) std::swap(u, v);
    parent_[v] = u;
    size_[u] += size_[v];
    ufTrail_.push_back(v);
  }
  void undo_unions(std::size_t mark) {
    while (ufTrail_.size() > mark) {
      int v = ufTrail_.back();
      ufTrail_.pop_back();
      int u = parent_[v];
      size_[u] -= size_[v];
      parent_[v] = v;
    }
  }

  void enqueue(int e) {
    if (!queued_[e]) {
      queued_[e] = true;
      queue_.push_back(e);
    }
  }

  bool restrict(int v, Mask m) {
    Mask next = dom_[v] & m;
    if (next == dom_[v]) return true;
    if (next == 0) return false;
    trail_.emplace_back(v, dom_[v]);
    dom_[v] = next;
    if (popcount(next) == 1 && (next & 1) == 0) unite(ends_[v].first, ends_[v].second);
    for (int e : varEqs_[v]) enqueue(e);
    return true;
  }

  bool propagate() {
    bool ok = true;
    while (!queue_.empty()) {
      int e = queue_.back();
      queue_.pop_back();
      queued_[e] = false;
      if (ok && !check(eqs_[e])) ok = false;
    }
    return ok;
  }

  // Known values: constants are 1; assigned variables have singleton domains.
  bool check(const Equation& eq) {
    Element sum = 0;
    const Term* open = nullptr;
    int openCount = 0;
    for (const auto& t : eq.terms) {
      bool aKnown = t.a < 0 || assigned(t.a);
      bool bKnown = t.b < 0 || assigned(t.b);
      Element av = t.a < 0 ? 1 : (aKnown ? value(t.a) : 0);
      Element bv = t.b < 0 ? 1 : (bKnown ? value(t.b) : 0);
      if ((aKnown && av == 0) || (bKnown && bv == 0)) continue;
      if (aKnown && bKnown) {
        sum = f_.add(sum, f_.mul(av, bv));
        continue;
      }
      open = &t;
      if (++openCount > 1) return true;
    }
    Element r = f_.sub(eq.rhs, sum);
    if (openCount == 0) return r == 0;
    const Term& t = *open;
    bool aKnown = t.a < 0 || assigned(t.a);
    bool bKnown = t.b < 0 || assigned(t.b);
    if (aKnown) {
      Element av = t.a < 0 ? 1 : value(t.a);
      return restrict(t.b, bit(f_.div(r, av)));
    }
    if (bKnown) {
      Element bv = t.b < 0 ? 1 : value(t.b);
      return restrict(t.a, bit(f_.div(r, bv)));
    }
    if (r != 0) return restrict(t.a, ~Mask{1}) && restrict(t.b, ~Mask{1});
    if ((dom_[t.a] & 1) == 0) return restrict(t.b, Mask{1});
    if ((dom_[t.b] & 1) == 0) return restrict(t.a, Mask{1});
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [v, m] = trail_.back();
      trail_.pop_back();
      dom_[v] = m;
    }
  }

  int choose() const {
    int best = -1;
    int bestSize = 1 << 30;
    for (std::size_t v = 0; v < dom_.size(); ++v) {
      int s = popcount(dom_[v]);
      if (s > 1 && s < bestSize) {
        best = static_cast<int>(v);
        bestSize = s;
        if (s == 2) break;
      }
    }
    return best;
  }

  bool dfs() {
    int v = choose();
    if (v < 0) return true;
    Mask options = dom_[v];
    if (find(ends_[v].first) != find(ends_[v].second)) options &= Mask{3};
    while (options != 0) {
      int val = lowest(options);
      options &= options - 1;
      if (++nodes_ > budget_) {
        exceeded_ = true;
        return false;
      }
      auto mark = trail_.size();
      auto ufMark = ufTrail_.size();
      bool ok = restrict(v, bit(static_cast<Element>(val))) && propagate();
      if (!ok) {
        queue_.clear();
        std::fill(queued_.begin(), queued_.end(), false);
      }
      if (ok && dfs()) return true;
      undo(mark);
      undo_unions(ufMark);
      if (exceeded_) return false;
    }
    return false;
  }

  const PrimeField& f_;
  std::vector<Equation> eqs_;
  std::vector<std::pair<int, int>> ends_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool exceeded_ = false;
  std::vector<Mask> dom_;
  std::vector<std::vector<int>> varEqs_;
  std::vector<std::pair<int, Mask>> trail_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> ufTrail_;
  std::vector<int> queue_;
  std::vector<bool> queued_;
};

}  // namespace

RectOutcome solve_rect(const RectProblem& pr, std::uint64_t budget) {
  const auto k = pr.k;
  const auto N = pr.N;
  const auto& f = pr.field;
  Reduced st;
  st.x.resize(k * N);
  st.y.resize(N * k);
  for (std::size_t i = 0; i < k * N; ++i) st.x[i] = pr.xFree[i] ? Entry::Var : Entry::Zero;
  for (std::size_t i = 0; i < N * k; ++i) st.y[i] = pr.yFree[i] ? Entry::Var : Entry::Zero;
  st.live = pr.equations;
  reduce(pr, st);

  // Variables and union-find nodes: rows of X are 0..k-1, columns of X are k..k+N-1.
  std::vector<int> xVar(k * N, -1), yVar(N * k, -1);
  std::vector<std::pair<int, int>> ends;
  std::vector<std::pair<int, int>> fixedEdges;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < N; ++c) {
      auto e = st.x[i * N + c];
      if (e == Entry::Var) {
        xVar[i * N + c] = static_cast<int>(ends.size());
        ends.emplace_back(static_cast<int>(i), static_cast<int>(k + c));
      } else if (e == Entry::One) {
        fixedEdges.emplace_back(static_cast<int>(i), static_cast<int>(k + c));
      }
    }
  }
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t j = 0; j < k; ++j) {
      auto e = st.y[c * k + j];
      if (e == Entry::Var) {
        yVar[c * k + j] = static_cast<int>(ends.size());
        ends.emplace_back(static_cast<int>(k + c), static_cast<int>(j));
      } else if (e == Entry::One) {
        fixedEdges.emplace_back(static_cast<int>(k + c), static_cast<int>(j));
      }
    }
  }

  std::vector<Equation> eqs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!st.live[i * k + j]) continue;
      Equation eq{{}, static_cast<Element>(i == j ? 1 : 0)};
      for (std::size_t c = 0; c < N; ++c) {
        auto xe = st.x[i * N + c];
        auto ye = st.y[c * k + j];
        if (xe == Entry::Zero || ye == Entry::Zero) continue;
        if (xe == Entry::Slack || ye == Entry::Slack) throw std::logic_error("slack entry in a live equation");
        eq.terms.push_back(Term{xVar[i * N + c], yVar[c * k + j]});
      }
      eqs.push_back(std::move(eq));
    }
  }

  Search search(f, ends.size(), std::move(eqs), ends, k + N, fixedEdges, budget);
  bool found = search.run();
  RectOutcome out;
  out.nodes = search.nodes();
  if (!found) {
    out.status = search.exceeded() ? SolveStatus::BudgetExceeded : SolveStatus::NoSolution;
    return out;
  }

  FieldMatrix X(f, k, N), Y(f, N, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < N; ++c) {
      auto e = st.x[i * N + c];
      if (e == Entry::One) X.set(i, c, 1);
      if (e == Entry::Var) X.set(i, c, search.value(xVar[i * N + c]));
    }
  }
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t j = 0; j < k; ++j) {
      auto e = st.y[c * k + j];
      if (e == Entry::One) Y.set(c, j, 1);
      if (e == Entry::Var) Y.set(c, j, search.value(yVar[c * k + j]));
    }
  }
  // Slack entries close the single equation they appear in; their partner entry is 1.
  auto prod = mat_mul(X, Y);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < N; ++c) {
      if (st.x[i * N + c] != Entry::Slack) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (st.y[c * k + j] == Entry::One && pr.equations[i * k + j]) {
          X.set(i, c, f.sub(i == j ? 1 : 0, prod.at(i, j)));
        }
      }
    }
  }
  for (std::size_t c = 0; c < N; ++c) {
    for (std::size_t j = 0; j < k; ++j) {
      if (st.y[c * k + j] != Entry::Slack) continue;
      for (std::size_t i = 0; i < k; ++i) {
        if (st.x[i * N + c] == Entry::One && pr.equations[i * k + j]) {
          Y.set(c, j, f.sub(i == j ? 1 : 0, prod.at(i, j)));
        }
      }
    }
  }
  auto check = mat_mul(X, Y);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (pr.equations[i * k + j] && check.at(i, j) != (i == j ? 1u : 0u))
        throw std::logic_error("bilinear solver: reconstructed product violates an equation");
  out.status = SolveStatus::Solved;
  out.x = std::move(X);
  out.y = std::move(Y);
  return out;
}

}  // namespace iforge::detail
