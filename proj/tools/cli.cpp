#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "iforge/ci.hpp"
#include "iforge/cnf.hpp"
#include "iforge/interleaving.hpp"
#include "iforge/onesided.hpp"
#include "iforge/presentation.hpp"
#include "iforge/staircase.hpp"
#include "json.hpp"

namespace iforge::cli {

namespace {

using Json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Json matrix_json(const FieldMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(a.at(i, j));
    rows.push_back(row);
  }
  return {{"p", a.field().p()}, {"rows", a.rows()}, {"cols", a.cols()}, {"entries", rows}};
}

FieldMatrix matrix_from_json(const Json& j) {
  if (j.is_string()) return parse_matrix(j.get<std::string>());
  PrimeField f(j.at("p").get<std::uint32_t>());
  FieldMatrix a(f, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& e = j.at("entries");
  if (e.size() != a.rows()) throw UsageError("matrix: row count mismatch");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (e[r].size() != a.cols()) throw UsageError("matrix: column count mismatch");
    for (std::size_t c = 0; c < a.cols(); ++c) a.set(r, c, f.reduce(e[r][c].get<std::int64_t>()));
  }
  return a;
}

Json rational_table(const std::vector<std::vector<Rational>>& t) {
  Json out = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.to_string());
    out.push_back(r);
  }
  return out;
}

void print_table(std::ostream& out, const std::vector<std::vector<Rational>>& t) {
  for (const auto& row : t) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k].to_string();
    out << '\n';
  }
}

StaircaseSum with_field(StaircaseSum m, std::uint32_t p) {
  if (p != 0) m.field = PrimeField(p);
  return m;
}

GradedPresentation with_field(const GradedPresentation& m, std::uint32_t p) {
  if (p == 0) return m;
  std::vector<Relation> rels;
  for (const auto& r : m.relations()) {
    Relation copy = r;
    PrimeField f(p);
    for (auto& c : copy.coeffs) c = f.reduce(static_cast<std::int64_t>(c));
    rels.push_back(std::move(copy));
  }
  return GradedPresentation(PrimeField(p), m.generators(), std::move(rels));
}

// A module given either as a staircase sum or as a general presentation.
struct Module {
  std::optional<StaircaseSum> sum;
  std::optional<GradedPresentation> pres;

  [[nodiscard]] GradedPresentation presentation() const { return pres ? *pres : sum_presentation(*sum); }
};

Module module_from_json(const Json& j, std::uint32_t p) {
  Module m;
  if (j.contains("summands")) {
    m.sum = with_field(sum_from_json(j.dump()), p);
  } else if (j.contains("generators")) {
    m.pres = with_field(presentation_from_json(j.dump()), p);
  } else {
    throw UsageError("expected a staircase sum or a presentation");
  }
  return m;
}

struct ModulePair {
  Module m;
  Module n;
  [[nodiscard]] bool staircases() const { return m.sum && n.sum; }
};

// {"M":..,"N":..} or a CI instance, which is turned into the gadget pair.
ModulePair load_pair(const std::string& path, std::uint32_t p) {
  auto j = parse_json_file(path);
  if (j.contains("kind")) {
    auto parsed = parse_instance_json(j.dump(), p);
    if (!parsed.ci) throw UsageError("a CI instance is needed to build modules, got " + parsed.kind);
    auto [ms, ns] = ci_to_modules(*parsed.ci);
    return {{ms, std::nullopt}, {ns, std::nullopt}};
  }
  if (!j.contains("M") || !j.contains("N")) throw UsageError(path + ": expected keys \"M\" and \"N\" or a CI instance");
  return {module_from_json(j.at("M"), p), module_from_json(j.at("N"), p)};
}

Json pair_json(const Json& m, const Json& n) { return {{"M", m}, {"N", n}}; }

Cnf3 load_dimacs(const std::string& path) {
  auto text = read_file(path);
  try {
    return parse_dimacs(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string status_word(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return "yes";
    case SolveStatus::NoSolution:
      return "no";
    case SolveStatus::BudgetExceeded:
      break;
  }
  return "budget exceeded";
}

int status_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved:
      return kExitYes;
    case SolveStatus::NoSolution:
      return kExitNo;
    case SolveStatus::BudgetExceeded:
      break;
  }
  return kExitBudget;
}

Point2 parse_point(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("point must look like x,y");
  return {Rational::parse(text.substr(0, comma)), Rational::parse(text.substr(comma + 1))};
}

Json solution_json(const CiSolution& s) { return {{"A", matrix_json(s.A)}, {"B", matrix_json(s.B)}}; }

void print_solution(std::ostream& out, const CiSolution& s) {
  out << "A: " << format_matrix(s.A) << '\n' << "B: " << format_matrix(s.B) << '\n';
}

CiSolution load_solution(const std::string& path) {
  auto text = read_file(path);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    auto j = Json::parse(text);
    const auto& body = j.contains("solution") ? j.at("solution") : j;
    return {matrix_from_json(body.at("A")), matrix_from_json(body.at("B"))};
  }
  std::optional<FieldMatrix> a, b;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("A:", 0) == 0) a = parse_matrix(line.substr(2));
    if (line.rfind("B:", 0) == 0) b = parse_matrix(line.substr(2));
  }
  if (!a || !b) throw UsageError(path + ": expected lines \"A: <matrix>\" and \"B: <matrix>\"");
  return {*a, *b};
}

struct Options {
  bool json = false;
  std::uint64_t budget = kDefaultBudget;
  std::uint32_t p = 0;
};

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  std::ostream& out_;
  std::ostream& err_;
  Options opt_;

  void emit(const Json& j) { out_ << j.dump(2) << '\n'; }

  // ci
  int ci_solve(const std::string& file, const std::string& algorithm);
  int ci_verify(const std::string& instance, const std::string& solution);
  int ci_to_cnf_cmd(const std::string& file);
  // sat, reduce
  int sat_solve(const std::string& dimacs);
  int reduce_sat_to_ci(const std::string& dimacs, bool gci);
  // gadgets
  int gadget_modules(const std::string& file);
  int gadget_surjection(const std::string& dimacs);
  int gadget_wrap(const std::string& file);
  // interleaving
  int interleave_decide(const std::string& file, const std::string& eps, bool presented);
  int interleave_distance(const std::string& file, bool emitMatrix);
  // onesided
  int onesided(const std::string& file, const std::string& mode, const std::string& s, const std::string& t,
               const std::string& shiftBy);
  // modules
  int module_eval(const std::string& file, const std::string& point, const std::string& which);
  int module_hom(const std::string& file);
};

int Cli::ci_solve(const std::string& file, const std::string& algorithm) {
  auto parsed = parse_instance_json(read_file(file), opt_.p);
  SolveResult r;
  if (parsed.kind == "ci") {
    auto algo = algorithm == "enumerate" ? CiAlgorithm::EnumerateA : CiAlgorithm::Propagate;
    r = solve_ci(*parsed.ci, opt_.budget, algo);
  } else {
    r = solve_gci(*parsed.gci, opt_.budget);
  }
  if (opt_.json) {
    Json j{{"status", status_word(r.status)}, {"nodes", r.nodes}};
    if (r.solution) j["solution"] = solution_json(*r.solution);
    emit(j);
  } else {
    out_ << status_word(r.status) << '\n';
    if (r.solution) print_solution(out_, *r.solution);
  }
  return status_code(r.status);
}

int Cli::ci_verify(const std::string& instance, const std::string& solution) {
  auto parsed = parse_instance_json(read_file(instance), opt_.p);
  auto sol = load_solution(solution);
  bool ok = false;
  try {
    ok = parsed.kind == "ci" ? verify_ci(*parsed.ci, sol) : verify_gci(*parsed.gci, sol);
  } catch (const std::invalid_argument& e) {
    err_ << "solution does not fit the instance: " << e.what() << '\n';
  }
  if (opt_.json)
    emit({{"valid", ok}});
  else
    out_ << (ok ? "valid" : "invalid") << '\n';
  return ok ? kExitYes : kExitNo;
}

int Cli::ci_to_cnf_cmd(const std::string& file) {
  auto parsed = parse_instance_json(read_file(file), opt_.p);
  if (!parsed.ci) throw UsageError("ci to-cnf needs a CI instance");
  auto enc = ci_to_cnf(*parsed.ci);
  if (opt_.json)
    emit({{"dimacs", emit_dimacs(enc.cnf)}, {"aVar", enc.aVar}, {"bVar", enc.bVar}});
  else
    out_ << emit_dimacs(enc.cnf);
  return kExitYes;
}

int Cli::sat_solve(const std::string& dimacs) {
  auto f = load_dimacs(dimacs);
  PrimeField field(opt_.p == 0 ? 2 : opt_.p);
  auto [gci, decoder] = sat3_to_gci(f, field);
  auto [ci, embedding] = gci_to_ci(gci);
  auto r = solve_ci(ci, opt_.budget);
  std::optional<Assignment> a;
  if (r.solution) a = extract_assignment(f, gci, embedding.restrict(*r.solution));
  if (opt_.json) {
    Json j{{"status", r.status == SolveStatus::Solved       ? "sat"
                      : r.status == SolveStatus::NoSolution ? "unsat"
                                                            : "budget exceeded"}};
    if (a) j["assignment"] = *a;
    emit(j);
  } else if (r.status == SolveStatus::BudgetExceeded) {
    out_ << "budget exceeded\n";
  } else if (!a) {
    out_ << "UNSAT\n";
  } else {
    out_ << "SAT\nv";
    for (std::size_t i = 0; i < a->size(); ++i) out_ << ' ' << ((*a)[i] ? "" : "-") << i + 1;
    out_ << " 0\n";
  }
  return status_code(r.status);
}

int Cli::reduce_sat_to_ci(const std::string& dimacs, bool gciOnly) {
  auto f = load_dimacs(dimacs);
  PrimeField field(opt_.p == 0 ? 2 : opt_.p);
  auto [gci, decoder] = sat3_to_gci(f, field);
  if (gciOnly) {
    out_ << gci_to_json(gci) << '\n';
  } else {
    out_ << ci_to_json(gci_to_ci(gci).first) << '\n';
  }
  return kExitYes;
}

int Cli::gadget_modules(const std::string& file) {
  auto parsed = parse_instance_json(read_file(file), opt_.p);
  if (!parsed.ci) throw UsageError("gadget modules needs a CI instance");
  auto [m, n] = ci_to_modules(*parsed.ci);
  emit(pair_json(Json::parse(sum_to_json(m)), Json::parse(sum_to_json(n))));
  return kExitYes;
}

int Cli::gadget_surjection(const std::string& dimacs) {
  auto f = load_dimacs(dimacs);
  auto g = sat3_to_surjection(f, PrimeField(opt_.p == 0 ? 2 : opt_.p));
  Json corners = Json::array();
  for (const auto& c : g.corners)
    corners.push_back({{"point", c.point}, {"at", {c.at.x.to_string(), c.at.y.to_string()}}, {"members", c.members}});
  auto j = pair_json(Json::parse(sum_to_json(g.M)), Json::parse(sum_to_json(g.N)));
  j["q"] = g.q;
  j["summands"] = g.summandNames;
  j["corners"] = corners;
  emit(j);
  return kExitYes;
}

int Cli::gadget_wrap(const std::string& file) {
  auto pair = load_pair(file, opt_.p);
  if (!pair.staircases()) throw UsageError("gadget wrap needs staircase sums");
  auto x = wrap_anchor({&*pair.m.sum, &*pair.n.sum});
  auto j = pair_json(Json::parse(presentation_to_json(indecomposable_wrap(*pair.m.sum, x))),
                     Json::parse(presentation_to_json(indecomposable_wrap(*pair.n.sum, x))));
  j["x"] = x.to_string();
  emit(j);
  return kExitYes;
}

int Cli::interleave_decide(const std::string& file, const std::string& epsText, bool presented) {
  auto pair = load_pair(file, opt_.p);
  auto eps = Rational::parse(epsText);
  if (eps < Rational(0)) throw UsageError("eps must be nonnegative");
  if (pair.staircases() && !presented) {
    auto d = decide_interleaving_staircase(*pair.m.sum, *pair.n.sum, eps, opt_.budget);
    if (opt_.json) {
      Json j{{"status", status_word(d.status)}, {"eps", eps.to_string()}};
      if (d.certificate) {
        j["f"] = matrix_json(d.certificate->f.matrix);
        j["g"] = matrix_json(d.certificate->g.matrix);
      }
      emit(j);
    } else {
      out_ << status_word(d.status) << '\n';
      if (d.certificate)
        out_ << "eps: " << eps.to_string() << '\n'
             << "f: " << format_matrix(d.certificate->f.matrix) << '\n'
             << "g: " << format_matrix(d.certificate->g.matrix) << '\n';
    }
    return status_code(d.status);
  }
  auto d = decide_interleaving_presented(pair.m.presentation(), pair.n.presentation(), eps, opt_.budget);
  if (opt_.json) {
    Json j{{"status", status_word(d.status)}, {"eps", eps.to_string()}};
    if (d.certificate) {
      j["f"] = matrix_json(d.certificate->f.lift());
      j["g"] = matrix_json(d.certificate->g.lift());
    }
    emit(j);
  } else {
    out_ << status_word(d.status) << '\n';
    if (d.certificate)
      out_ << "eps: " << eps.to_string() << '\n'
           << "f lift: " << format_matrix(d.certificate->f.lift()) << '\n'
           << "g lift: " << format_matrix(d.certificate->g.lift()) << '\n';
  }
  return status_code(d.status);
}

int Cli::interleave_distance(const std::string& file, bool emitMatrix) {
  auto pair = load_pair(file, opt_.p);
  if (!pair.staircases()) throw UsageError("interleave distance needs staircase sums");
  const auto& m = *pair.m.sum;
  const auto& n = *pair.n.sum;
  if (m.summands.size() != n.summands.size()) throw UsageError("both sums need the same number of summands");
  auto d = interleaving_distance_staircase(m, n, opt_.budget);
  if (opt_.json) {
    Json j{{"status", status_word(d.status)}};
    if (d.status == SolveStatus::Solved) j["distance"] = d.distance.to_string();
    if (d.certificate) {
      j["f"] = matrix_json(d.certificate->f.matrix);
      j["g"] = matrix_json(d.certificate->g.matrix);
    }
    if (emitMatrix) j["distanceMatrix"] = {{"MN", rational_table(distance_matrix(m, n))}, {"NM", rational_table(distance_matrix(n, m))}};
    emit(j);
  } else {
    if (emitMatrix) {
      out_ << "d_s(M_i, N_j):\n";
      print_table(out_, distance_matrix(m, n));
      out_ << "d_s(N_j, M_i):\n";
      print_table(out_, distance_matrix(n, m));
    }
    if (d.status == SolveStatus::Solved)
      out_ << d.distance.to_string() << '\n';
    else
      out_ << status_word(d.status) << '\n';
  }
  return d.status == SolveStatus::BudgetExceeded ? kExitBudget : kExitYes;
}

int Cli::onesided(const std::string& file, const std::string& mode, const std::string& s, const std::string& t,
                  const std::string& shiftBy) {
  auto pair = load_pair(file, opt_.p);
  if (!pair.staircases()) throw UsageError("onesided commands need staircase sums");
  auto m = *pair.m.sum;
  auto n = *pair.n.sum;
  if (!shiftBy.empty()) n = shift(n, Rational::parse(shiftBy));
  OneSidedDecision d;
  if (mode == "surjection") {
    d = exists_surjection(m, n, opt_.budget);
  } else if (mode == "injection") {
    d = exists_injection(m, n, opt_.budget);
  } else {
    d = exists_st_trivial_morphism(m, n, {Bound::parse(s), Bound::parse(t)}, opt_.budget);
  }
  if (opt_.json) {
    Json j{{"status", status_word(d.status)}};
    if (d.morphism) j["f"] = matrix_json(d.morphism->matrix);
    emit(j);
  } else {
    out_ << status_word(d.status) << '\n';
    if (d.morphism) out_ << "f: " << format_matrix(d.morphism->matrix) << '\n';
  }
  return status_code(d.status);
}

int Cli::module_eval(const std::string& file, const std::string& pointText, const std::string& which) {
  auto j = parse_json_file(file);
  Module m;
  if (j.contains("M") && j.contains("N")) {
    m = module_from_json(j.at(which), opt_.p);
  } else {
    m = module_from_json(j, opt_.p);
  }
  auto p = parse_point(pointText);
  auto dim = eval_dim(m.presentation(), p);
  if (opt_.json)
    emit({{"point", {p.x.to_string(), p.y.to_string()}}, {"dim", dim}});
  else
    out_ << dim << '\n';
  return kExitYes;
}

int Cli::module_hom(const std::string& file) {
  auto pair = load_pair(file, opt_.p);
  auto basis = hom_space(pair.m.presentation(), pair.n.presentation());
  if (opt_.json) {
    Json lifts = Json::array();
    for (const auto& b : basis) lifts.push_back(matrix_json(b.lift()));
    emit({{"dim", basis.size()}, {"basis", lifts}});
  } else {
    out_ << basis.size() << '\n';
  }
  return kExitYes;
}

int Cli::run(const std::vector<std::string>& args) {
  CLI::App app{"Interleaving distance and constrained invertibility toolkit", "iforge"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto common = [&](CLI::App* sub, bool search) {
    sub->add_flag("--json", opt_.json, "Machine-readable output");
    sub->add_option("--p", opt_.p, "Prime field size (overrides the input)")->check(CLI::Range(2u, 97u));
    if (search) sub->add_option("--budget", opt_.budget, "Search node budget")->capture_default_str();
  };
  std::function<int()> action;

  std::string file, file2, dimacs, algorithm = "propagate", eps, s, t, shiftBy, point, which = "M";
  bool gciOnly = false, emitMatrix = false, presented = false;

  auto* ci = app.add_subcommand("ci", "Constrained invertibility instances");
  ci->require_subcommand(1);
  auto* ciSolve = ci->add_subcommand("solve", "Solve a CI or GCI instance");
  common(ciSolve, true);
  ciSolve->add_option("instance", file, "Instance JSON")->required();
  ciSolve->add_option("--algorithm", algorithm, "propagate or enumerate")
      ->check(CLI::IsMember({"propagate", "enumerate"}));
  ciSolve->callback([&] { action = [&] { return ci_solve(file, algorithm); }; });

  auto* ciVerify = ci->add_subcommand("verify", "Check a solution against an instance");
  common(ciVerify, false);
  ciVerify->add_option("instance", file, "Instance JSON")->required();
  ciVerify->add_option("solution", file2, "Output of ci solve")->required();
  ciVerify->callback([&] { action = [&] { return ci_verify(file, file2); }; });

  auto* ciCnf = ci->add_subcommand("to-cnf", "Encode a GF(2) CI instance as DIMACS");
  common(ciCnf, false);
  ciCnf->add_option("instance", file, "Instance JSON")->required();
  ciCnf->callback([&] { action = [&] { return ci_to_cnf_cmd(file); }; });

  auto* sat = app.add_subcommand("sat", "3CNF satisfiability");
  sat->require_subcommand(1);
  auto* satSolve = sat->add_subcommand("solve", "Decide a 3CNF through the CI reduction");
  common(satSolve, true);
  satSolve->add_option("--dimacs", dimacs, "DIMACS file")->required();
  satSolve->callback([&] { action = [&] { return sat_solve(dimacs); }; });

  auto* reduce = app.add_subcommand("reduce", "Reductions");
  reduce->require_subcommand(1);
  auto* satToCi = reduce->add_subcommand("sat-to-ci", "3CNF to CI instance");
  common(satToCi, false);
  satToCi->add_option("--dimacs", dimacs, "DIMACS file")->required();
  satToCi->add_flag("--gci", gciOnly, "Stop at the GCI instance");
  satToCi->callback([&] { action = [&] { return reduce_sat_to_ci(dimacs, gciOnly); }; });

  auto* gadget = app.add_subcommand("gadget", "Module constructions");
  gadget->require_subcommand(1);
  auto* gModules = gadget->add_subcommand("modules", "Staircase sums from a CI instance");
  common(gModules, false);
  gModules->add_option("instance", file, "CI instance JSON")->required();
  gModules->callback([&] { action = [&] { return gadget_modules(file); }; });
  auto* gSurj = gadget->add_subcommand("surjection", "Surjection gadget from a 3CNF");
  common(gSurj, false);
  gSurj->add_option("--dimacs", dimacs, "DIMACS file")->required();
  gSurj->callback([&] { action = [&] { return gadget_surjection(dimacs); }; });
  auto* gWrap = gadget->add_subcommand("wrap", "Indecomposable wraps of a pair of sums");
  common(gWrap, false);
  gWrap->add_option("pair", file, "Module pair JSON or CI instance")->required();
  gWrap->callback([&] { action = [&] { return gadget_wrap(file); }; });

  auto* inter = app.add_subcommand("interleave", "Interleaving decisions");
  inter->require_subcommand(1);
  auto* iDecide = inter->add_subcommand("decide", "Decide eps-interleaving");
  common(iDecide, true);
  iDecide->add_option("pair", file, "Module pair JSON or CI instance")->required();
  iDecide->add_option("--eps", eps, "Rational eps")->required();
  iDecide->add_flag("--presented", presented, "Use the presentation decider even for staircase sums");
  iDecide->callback([&] { action = [&] { return interleave_decide(file, eps, presented); }; });
  auto* iDist = inter->add_subcommand("distance", "Interleaving distance of staircase sums");
  common(iDist, true);
  iDist->add_option("pair", file, "Module pair JSON or CI instance")->required();
  iDist->add_flag("--emit-distance-matrix", emitMatrix, "Print the pairwise shift distances");
  iDist->callback([&] { action = [&] { return interleave_distance(file, emitMatrix); }; });

  auto* one = app.add_subcommand("onesided", "Morphisms with trivial kernel or cokernel");
  one->require_subcommand(1);
  auto addOne = [&](const std::string& name, const std::string& help, bool params) {
    auto* sub = one->add_subcommand(name, help);
    common(sub, true);
    sub->add_option("pair", file, "Module pair JSON (M -> N)")->required();
    sub->add_option("--shift", shiftBy, "Replace N by its shift by this amount");
    if (params) {
      sub->add_option("--s", s, "Kernel bound (rational or inf)")->required();
      sub->add_option("--t", t, "Cokernel bound (rational or inf)")->required();
    }
    sub->callback([&, name] { action = [&, name] { return onesided(file, name, s, t, shiftBy); }; });
  };
  addOne("decide", "Morphism with s-trivial kernel and t-trivial cokernel", true);
  addOne("surjection", "Surjective morphism", false);
  addOne("injection", "Injective morphism", false);

  auto* mod = app.add_subcommand("module", "Pointwise module queries");
  mod->require_subcommand(1);
  auto* mEval = mod->add_subcommand("eval", "Dimension at a point");
  common(mEval, false);
  mEval->add_option("module", file, "Presentation, staircase sum, or pair JSON")->required();
  mEval->add_option("--point", point, "x,y")->required();
  mEval->add_option("--which", which, "M or N when given a pair")->check(CLI::IsMember({"M", "N"}));
  mEval->callback([&] { action = [&] { return module_eval(file, point, which); }; });
  auto* mHom = mod->add_subcommand("hom", "Dimension of Hom(M, N)");
  common(mHom, false);
  mHom->add_option("pair", file, "Module pair JSON or CI instance")->required();
  mHom->callback([&] { action = [&] { return module_hom(file); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out_, err_);
    return rc == 0 ? kExitYes : kExitUsage;
  }
  if (!action) return kExitUsage;
  try {
    return action();
  } catch (const UsageError& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err_ << "error: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err_ << "error: malformed input: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace iforge::cli
