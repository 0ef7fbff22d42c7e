#include "iforge/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace iforge {

void Cnf3::validate() const {
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    const auto& cl = clauses[c];
    for (std::size_t i = 0; i < 3; ++i) {
      if (cl[i].var >= numVars) {
        throw std::invalid_argument("clause " + std::to_string(c + 1) + ": variable out of range");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (cl[i].var == cl[j].var) {
          throw std::invalid_argument("clause " + std::to_string(c + 1) + " repeats variable " +
                                      std::to_string(cl[i].var + 1));
        }
      }
    }
  }
}

namespace {

struct RawDimacs {
  std::int64_t vars = -1;
  std::int64_t clauseCount = -1;
  std::vector<std::vector<std::int64_t>> clauses;
  std::vector<std::string> comments;
};

RawDimacs read_dimacs(std::string_view text) {
  RawDimacs out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::int64_t> current;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == 'c') {
      out.comments.push_back(line.substr(first));
      continue;
    }
    if (line[first] == '%') break;  // some benchmark files end with "%"
    if (line[first] == 'p') {
      if (out.vars >= 0) throw std::invalid_argument("DIMACS: duplicate header");
      std::istringstream hs(line.substr(first));
      std::string p, fmt;
      std::string extra;
      if (!(hs >> p >> fmt >> out.vars >> out.clauseCount) || fmt != "cnf" || out.vars < 0 ||
          out.clauseCount < 0 || (hs >> extra)) {
        throw std::invalid_argument("DIMACS: malformed header '" + line + "'");
      }
      continue;
    }
    if (out.vars < 0) throw std::invalid_argument("DIMACS: clause before header");
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      long long v = std::strtoll(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') throw std::invalid_argument("DIMACS: bad token '" + tok + "'");
      if (v == 0) {
        out.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::llabs(v) > out.vars) {
          throw std::invalid_argument("DIMACS: variable " + std::to_string(std::llabs(v)) + " out of range");
        }
        current.push_back(v);
      }
    }
  }
  if (out.vars < 0) throw std::invalid_argument("DIMACS: missing header");
  if (!current.empty()) throw std::invalid_argument("DIMACS: last clause not terminated by 0");
  if (static_cast<std::int64_t>(out.clauses.size()) != out.clauseCount) {
    throw std::invalid_argument("DIMACS: header declares " + std::to_string(out.clauseCount) + " clauses, found " +
                                std::to_string(out.clauses.size()));
  }
  return out;
}

}  // namespace

Cnf3 parse_dimacs(std::string_view text) {
  auto raw = read_dimacs(text);
  Cnf3 f;
  f.numVars = static_cast<std::uint32_t>(raw.vars);
  f.comments = std::move(raw.comments);
  for (std::size_t c = 0; c < raw.clauses.size(); ++c) {
    const auto& cl = raw.clauses[c];
    if (cl.size() != 3) {
      throw std::invalid_argument("DIMACS: clause " + std::to_string(c + 1) + " has width " +
                                  std::to_string(cl.size()) + ", expected 3");
    }
    Clause3 out{};
    for (std::size_t i = 0; i < 3; ++i) {
      out[i] = Literal{static_cast<std::uint32_t>(std::llabs(cl[i]) - 1), cl[i] < 0};
    }
    f.clauses.push_back(out);
  }
  f.validate();
  return f;
}

std::string emit_dimacs(const Cnf3& f) {
  std::ostringstream os;
  os << "p cnf " << f.numVars << ' ' << f.clauses.size() << '\n';
  for (const auto& cl : f.clauses) {
    for (const auto& lit : cl) os << (lit.negated ? "-" : "") << (lit.var + 1) << ' ';
    os << "0\n";
  }
  return os.str();
}

bool eval_assignment(const Cnf3& f, const Assignment& a) {
  if (a.size() != f.numVars) throw std::invalid_argument("assignment length does not match variable count");
  return std::all_of(f.clauses.begin(), f.clauses.end(), [&](const Clause3& cl) {
    return std::any_of(cl.begin(), cl.end(), [&](const Literal& l) { return a[l.var] != l.negated; });
  });
}

std::optional<Assignment> brute_force_sat(const Cnf3& f) {
  if (f.numVars > kBruteForceMaxVars) {
    throw std::invalid_argument("brute_force_sat: too many variables (" + std::to_string(f.numVars) + ")");
  }
  // Clause masks: a clause is falsified by x iff x agrees with its "falsifying" bits.
  struct Mask {
    std::uint32_t vars;
    std::uint32_t falsify;
  };
  std::vector<Mask> masks;
  masks.reserve(f.clauses.size());
  for (const auto& cl : f.clauses) {
    Mask m{0, 0};
    for (const auto& l : cl) {
      m.vars |= 1u << l.var;
      if (l.negated) m.falsify |= 1u << l.var;
    }
    masks.push_back(m);
  }
  const std::uint64_t total = std::uint64_t{1} << f.numVars;
  for (std::uint64_t x = 0; x < total; ++x) {
    auto bits = static_cast<std::uint32_t>(x);
    bool ok = true;
    for (const auto& m : masks) {
      if ((bits & m.vars) == m.falsify) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Assignment a(f.numVars);
      for (std::uint32_t v = 0; v < f.numVars; ++v) a[v] = ((bits >> v) & 1u) != 0;
      return a;
    }
  }
  return std::nullopt;
}

std::string emit_dimacs(const Cnf& f) {
  std::ostringstream os;
  os << "p cnf " << f.numVars << ' ' << f.clauses.size() << '\n';
  for (const auto& cl : f.clauses) {
    for (auto lit : cl) os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf parse_dimacs_general(std::string_view text) {
  auto raw = read_dimacs(text);
  Cnf f;
  f.numVars = static_cast<std::uint32_t>(raw.vars);
  for (auto& cl : raw.clauses) {
    std::vector<std::int32_t> c(cl.begin(), cl.end());
    f.add(std::move(c));
  }
  return f;
}

namespace {

// Chronological-backtracking DPLL with two-watched-literal propagation.
class Dpll {
 public:
  explicit Dpll(const Cnf& f) : numVars_(f.numVars), value_(f.numVars + 1, kUnset), watches_(2 * (f.numVars + 1)) {
    for (const auto& cl : f.clauses) {
      std::vector<std::int32_t> c;
      for (auto l : cl) {
        if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > numVars_) {
          throw std::invalid_argument("CNF literal out of range");
        }
        if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
      }
      bool taut = false;
      for (auto l : c)
        if (std::find(c.begin(), c.end(), -l) != c.end()) taut = true;
      if (taut) continue;
      if (c.empty()) {
        conflictAtRoot_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      auto idx = clauses_.size();
      clauses_.push_back(std::move(c));
      watches_[slot(clauses_[idx][0])].push_back(idx);
      watches_[slot(clauses_[idx][1])].push_back(idx);
    }
  }

  std::optional<Model> solve() {
    if (conflictAtRoot_) return std::nullopt;
    for (auto u : units_) {
      if (!enqueue(u)) return std::nullopt;
    }
    if (!propagate()) return std::nullopt;
    while (true) {
      std::uint32_t v = pick();
      if (v == 0) break;
      levels_.push_back(trail_.size());
      decisions_.push_back(-static_cast<std::int32_t>(v));  // try false first
      flipped_.push_back(false);
      enqueue(decisions_.back());
      while (!propagate()) {
        if (!backtrack()) return std::nullopt;
      }
    }
    Model m(numVars_ + 1, false);
    for (std::uint32_t v = 1; v <= numVars_; ++v) m[v] = value_[v] == kTrue;
    return m;
  }

 private:
  static constexpr std::int8_t kUnset = -1;
  static constexpr std::int8_t kFalse = 0;
  static constexpr std::int8_t kTrue = 1;

  static std::size_t slot(std::int32_t lit) {
    return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0);
  }
  std::int8_t lit_value(std::int32_t lit) const {
    auto v = value_[static_cast<std::size_t>(std::abs(lit))];
    if (v == kUnset) return kUnset;
    return (lit > 0) == (v == kTrue) ? kTrue : kFalse;
  }
  bool enqueue(std::int32_t lit) {
    auto cur = lit_value(lit);
    if (cur == kFalse) return false;
    if (cur == kTrue) return true;
    value_[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? kTrue : kFalse;
    trail_.push_back(lit);
    return true;
  }
  bool propagate() {
    while (head_ < trail_.size()) {
      auto falseLit = -trail_[head_++];
      auto& ws = watches_[slot(falseLit)];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t w = 0; w < ws.size(); ++w) {
        auto ci = ws[w];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        auto& c = clauses_[ci];
        if (c[0] == falseLit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[slot(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(c[0])) conflict = true;
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }
  std::uint32_t pick() const {
    for (std::uint32_t v = 1; v <= numVars_; ++v)
      if (value_[v] == kUnset) return v;
    return 0;
  }
  // Flip the most recent decision that has not been flipped yet.
  bool backtrack() {
    while (!decisions_.empty()) {
      auto lit = decisions_.back();
      auto level = levels_.back();
      bool wasFlipped = flipped_.back();
      undo_to(level);
      if (!wasFlipped) {
        decisions_.back() = -lit;
        flipped_.back() = true;
        enqueue(-lit);
        return true;
      }
      decisions_.pop_back();
      levels_.pop_back();
      flipped_.pop_back();
    }
    return false;
  }
  void undo_to(std::size_t level) {
    while (trail_.size() > level) {
      value_[static_cast<std::size_t>(std::abs(trail_.back()))] = kUnset;
      trail_.pop_back();
    }
    head_ = std::min(head_, trail_.size());
  }

  std::uint32_t numVars_;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::vector<std::int32_t>> clauses_;
  std::vector<std::int32_t> units_;
  std::vector<std::int32_t> trail_;
  std::vector<std::size_t> levels_;
  std::vector<std::int32_t> decisions_;
  std::vector<bool> flipped_;
  std::size_t head_ = 0;
  bool conflictAtRoot_ = false;
};

}  // namespace

std::optional<Model> dpll_solve(const Cnf& f) { return Dpll(f).solve(); }

std::size_t count_projected_models(Cnf f, const std::vector<std::uint32_t>& projection, std::size_t limit) {
  std::size_t count = 0;
  while (count < limit) {
    auto model = dpll_solve(f);
    if (!model) break;
    ++count;
    std::vector<std::int32_t> block;
    for (auto v : projection) {
      auto lit = static_cast<std::int32_t>(v);
      block.push_back((*model)[v] ? -lit : lit);
    }
    if (block.empty()) break;
    f.add(std::move(block));
  }
  return count;
}

}  // namespace iforge
