// pbqr: command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 not representable or
// verification failure, 3 internal error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pbqr/pbqr.hpp"

namespace {

using namespace pbqr;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRejected = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

MultilinearPoly load(const std::string& path) {
  if (!std::ifstream(path)) throw UsageError("cannot open '" + path + "'");
  return load_poly(path);
}

void result(const std::string& key, const std::string& value) { std::cout << "RESULT " << key << "=" << value << "\n"; }
void result(const std::string& key, const Rational& value) { result(key, to_string(value)); }
void result(const std::string& key, bool value) { result(key, std::string(value ? "true" : "false")); }
void result(const std::string& key, long value) { result(key, std::to_string(value)); }

std::string index_list(Mask s) {
  std::string out;
  for (int i : to_indices(s)) out += (out.empty() ? "" : ",") + std::to_string(i);
  return out;
}

std::string state_string(Mask z, int m) {
  std::string out;
  for (int l = 0; l < m; ++l) out += contains(z, l) ? '1' : '0';
  return out.empty() ? "-" : out;
}

void print_report(const VerificationReport& rep) {
  std::cout << "# x f(x) min_z_h gap z_argmin unique\n";
  for (const auto& row : rep.rows)
    std::cout << "row " << format_set(row.x) << " " << to_string(row.f_value) << " " << to_string(row.h_min) << " "
              << to_string(row.gap) << " " << state_string(row.z_argmin, rep.m) << " " << (row.unique_argmin ? 1 : 0)
              << "\n";
}

void print_quadratic(const QuadraticPoly& h) {
  std::cout << "# quadratic: x1..x" << h.n_x() << " are indices 1.." << h.n_x();
  if (h.n_z() > 0) std::cout << ", z1..z" << h.n_z() << " are indices " << h.n_x() + 1 << ".." << h.n_nodes();
  std::cout << "\n" << format_poly(h.poly());
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

void dump_lp(const std::string& path, const LinearProgram& lp) {
  if (path.empty()) return;
  std::ostringstream text;
  lp.dump(text);
  write_file(path, text.str());
}

MbfTable parse_table(const std::string& bits, int k) {
  if (bits.size() != (std::size_t{1} << k)) throw UsageError("MBF bit-string '" + bits + "' has the wrong length");
  std::vector<bool> b;
  for (char c : bits) {
    if (c != '0' && c != '1') throw UsageError("MBF bit-string '" + bits + "' has a character other than 0/1");
    b.push_back(c == '1');
  }
  MbfTable t(k, std::move(b));
  if (!is_monotone(t)) throw UsageError("MBF bit-string '" + bits + "' is not monotone");
  return t;
}

// all | pruned | generators | <file of bit-strings>
std::vector<MbfTable> select_mbfs(const std::string& choice, int k, bool& allow_degenerate) {
  allow_degenerate = false;
  if (choice == "all") {
    allow_degenerate = true;
    return enumerate_mbfs(k);
  }
  if (choice == "pruned") return prune_mbf_set(enumerate_mbfs(k));
  if (choice == "generators") {
    if (k != 4) throw UsageError("--mbfs generators requires --k 4");
    return {MbfTable::threshold(4, 3), MbfTable::threshold(4, 2)};
  }
  std::ifstream in(choice);
  if (!in) throw UsageError("cannot open MBF list '" + choice + "'");
  std::vector<MbfTable> out;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(parse_table(w, k));
  }
  allow_degenerate = true;
  return out;
}

struct ReduceArgs {
  std::string file;
  int k = -1;
  std::string mbfs;
  bool full_lp = false;
  std::string lp_dump;
  std::string out;
  std::vector<int> anchor;
};

ReductionProblem make_problem(const ReduceArgs& a) {
  const MultilinearPoly f = load(a.file);
  const int k = a.k >= 0 ? a.k : f.n_vars();
  std::string choice = a.mbfs;
  if (choice.empty()) {
    if (k <= 3)
      choice = "pruned";
    else if (k == 4)
      choice = "generators";
    else
      throw UsageError("--mbfs is required for k > 4");
  }
  bool allow = false;
  std::vector<MbfTable> ms = select_mbfs(choice, k, allow);
  return ReductionProblem(f, std::move(ms), k, allow);
}

void print_reduction(const ReductionResult& r) {
  result("distance", r.l1_distance);
  result("mbfs", long(r.quadratic.n_z()));
  result("avs", long(r.quadratic.active_avs()));
  result("verified", r.report.passed);
  result("induced_monotone", r.report.all_induced_monotone());
  print_quadratic(r.quadratic);
  print_report(r.report);
}

int cmd_check(const std::string& file) {
  const MultilinearPoly f = load(file);
  result("vars", long(f.n_vars()));
  result("degree", long(f.degree()));
  result("submodular", is_submodular(f));
  return kExitOk;
}

int cmd_minimize(const std::string& file) {
  const MultilinearPoly f = load(file);
  if (f.degree() > 2) throw UsageError("minimize expects a quadratic");
  const QuadraticMinimum q = minimize_quadratic(QuadraticPoly(f, f.n_vars()));
  result("min", q.value);
  result("argmin", index_list(q.argmin));
  return kExitOk;
}

int cmd_reduce(const ReduceArgs& a, bool require_exact) {
  const ReductionProblem p = make_problem(a);
  if (!a.lp_dump.empty()) dump_lp(a.lp_dump, build_reduction_lp(p));
  const ReductionResult r = nearest_quadratic(p, ReductionOptions{!a.full_lp});
  print_reduction(r);
  if (!a.out.empty()) write_file(a.out, format_poly(r.quadratic.poly()));
  if (!r.report.passed && require_exact) {
    result("representable", false);
    return kExitRejected;
  }
  if (require_exact) result("representable", true);
  return kExitOk;
}

int cmd_overestimate(const ReduceArgs& a) {
  const ReductionProblem p = make_problem(a);
  const Mask anchor = from_indices(a.anchor);
  if (!a.lp_dump.empty()) {
    ReductionLayout L;
    LinearProgram lp = build_reduction_lp(p, &L);
    dump_lp(a.lp_dump, lp);
  }
  const auto r = overestimate(p, anchor);
  if (!r) {
    result("feasible", false);
    return kExitRejected;
  }
  result("feasible", true);
  bool above = true;
  for (const auto& row : r->report.rows) above = above && sgn(row.gap) <= 0;
  result("overestimates", above);
  result("tight_at_anchor", sgn(r->per_labeling_gap.at(anchor)) == 0);
  result("mass", r->lp_objective);
  print_reduction(*r);
  if (!a.out.empty()) write_file(a.out, format_poly(r->quadratic.poly()));
  return kExitOk;
}

int cmd_reduce4(const std::string& file, bool nearest, const std::string& lp_dump) {
  const QuarticFunction f(load(file));
  if (!f.is_submodular()) throw UsageError("reduce4 expects a submodular function");
  dump_lp(lp_dump, build_quartic_lp(f, !nearest));
  const QuarticResult r = reduce_quartic(f, nearest);
  result("representable", r.representable);
  if (!r.joint) return kExitRejected;
  result("distance", r.distance);
  result("states_match", r.states_match);
  const JointQuadratic& q = *r.joint;
  auto coef = [](const std::string& name, const Rational& v) { std::cout << "coef " << name << " " << to_string(v) << "\n"; };
  coef("b0", q.b0);
  for (int i = 0; i < 4; ++i) coef("b" + std::to_string(i + 1), q.b[i]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) coef("b" + std::to_string(i + 1) + std::to_string(j + 1), q.bq[pair_index(i, j)]);
  coef("g1", q.g1);
  for (int i = 0; i < 4; ++i) coef("g1_" + std::to_string(i + 1), q.g1i[i]);
  coef("g2", q.g2);
  for (int i = 0; i < 4; ++i) coef("g2_" + std::to_string(i + 1), q.g2i[i]);
  coef("j12", q.j12);
  print_quadratic(q.to_quadratic());
  print_report(*r.report);
  return r.representable ? kExitOk : (nearest ? kExitOk : kExitRejected);
}

int cmd_verify(const std::string& f_file, const std::string& h_file, int avs, int k) {
  const MultilinearPoly f = load(f_file);
  MultilinearPoly h = load(h_file);
  if (k < 0) k = std::max(f.n_vars(), h.n_vars() - avs);
  if (h.n_vars() > k + avs) throw UsageError("h uses more than k + avs variables");
  h = h.widened(k + avs);
  const QuadraticPoly hq(h, k);
  const VerificationReport rep = verify_reduction(f, hq);
  result("verified", rep.passed);
  result("l1_gap", rep.l1_gap());
  if (hq.is_submodular()) result("induced_monotone", rep.all_induced_monotone());
  print_report(rep);
  return rep.passed ? kExitOk : kExitRejected;
}

int cmd_mbf_count(int k) {
  result("count", long(enumerate_mbfs(k).size()));
  return kExitOk;
}

int cmd_mbf_dump(int k) {
  const auto all = enumerate_mbfs(k);
  for (const auto& t : all) std::cout << t.to_bitstring() << "\n";
  result("count", long(all.size()));
  return kExitOk;
}

int cmd_gen_table(int group, const std::vector<int>& pattern) {
  if (pattern.size() != 4) throw UsageError("gen-table expects four indices i j k l");
  const CatalogEntry e = generator_catalog(group, {pattern[0], pattern[1], pattern[2], pattern[3]});
  std::cout << "# f = " << pretty_poly(e.f.poly) << "\n" << format_poly(e.f.poly);
  result("corrected", e.corrected);
  if (!e.quadratic) {
    result("quadratic", std::string("none"));
    return kExitOk;
  }
  std::cout << "# h = " << pretty_poly(e.quadratic->poly(), 4) << "\n";
  print_quadratic(*e.quadratic);
  const VerificationReport rep = verify_reduction(e.f.poly, *e.quadratic);
  result("verified", rep.passed);
  return rep.passed ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratization of submodular pseudo-Boolean functions"};
  app.require_subcommand(1);

  std::string file, h_file, lp_dump;
  int k = -1, avs = 0, group = 0;
  bool nearest = false;
  std::vector<int> pattern{1, 2, 3, 4};
  ReduceArgs ra;

  auto* check = app.add_subcommand("check", "report degree and submodularity");
  check->add_option("file", file, "polynomial file")->required();

  auto* minimize = app.add_subcommand("minimize", "minimize a submodular quadratic by max-flow");
  minimize->add_option("file", file, "quadratic file")->required();

  auto add_reduce_options = [&](CLI::App* c) {
    c->add_option("file", ra.file, "target polynomial file")->required();
    c->add_option("--k", ra.k, "number of original variables");
    c->add_option("--mbfs", ra.mbfs, "all | pruned | generators | file of bit-strings");
    c->add_flag("--full-lp", ra.full_lp, "solve the full MBF set directly instead of small subsets first");
    c->add_option("--lp-dump", ra.lp_dump, "write the LP in plain text to this path");
    c->add_option("--out", ra.out, "write the quadratic to this path");
  };
  auto* reduce = app.add_subcommand("reduce", "exact reduction with a fixed MBF set");
  add_reduce_options(reduce);
  auto* nearest_cmd = app.add_subcommand("nearest", "L1-nearest quadratic with a fixed MBF set");
  add_reduce_options(nearest_cmd);
  auto* over = app.add_subcommand("overestimate", "tightest quadratic upper bound, exact at an anchor");
  add_reduce_options(over);
  over->add_option("--anchor", ra.anchor, "1-based indices of the anchor labeling");

  auto* reduce4 = app.add_subcommand("reduce4", "two-AV generator reduction of a quartic");
  reduce4->add_option("file", file, "quartic file")->required();
  reduce4->add_flag("--nearest", nearest, "return the L1-nearest generator quadratic");
  reduce4->add_option("--lp-dump", lp_dump, "write the LP in plain text to this path");

  auto* verify = app.add_subcommand("verify", "check f(x) = min_z h(x, z) on every labeling");
  verify->add_option("f_file", file, "function file")->required();
  verify->add_option("h_file", h_file, "quadratic file")->required();
  verify->add_option("--avs", avs, "number of auxiliary variables (the last indices of h)")->required();
  verify->add_option("--k", k, "number of original variables");

  auto* mbf_count = app.add_subcommand("mbf-count", "number of monotone Boolean functions");
  mbf_count->add_option("k", k, "variable count")->required()->check(CLI::Range(0, kMaxMbfEnumVars));
  auto* mbf_dump = app.add_subcommand("mbf-dump", "list monotone Boolean functions as bit-strings");
  mbf_dump->add_option("k", k, "variable count")->required()->check(CLI::Range(0, kMaxMbfEnumVars));

  auto* gen = app.add_subcommand("gen-table", "generator catalog row");
  gen->add_option("group", group, "group 1..10")->required()->check(CLI::Range(1, kCatalogGroups));
  gen->add_option("pattern", pattern, "i j k l")->expected(4);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(file);
    if (*minimize) return cmd_minimize(file);
    if (*reduce) return cmd_reduce(ra, true);
    if (*nearest_cmd) return cmd_reduce(ra, false);
    if (*over) return cmd_overestimate(ra);
    if (*reduce4) return cmd_reduce4(file, nearest, lp_dump);
    if (*verify) return cmd_verify(file, h_file, avs, k);
    if (*mbf_count) return cmd_mbf_count(k);
    if (*mbf_dump) return cmd_mbf_dump(k);
    if (*gen) return cmd_gen_table(group, pattern);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotSubmodularQuadratic& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
