#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fingen/fingen.hpp"

using namespace fingen;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kCap = 3, kRedFlag = 4 };

struct Globals {
  std::uint64_t max_order = Limits{}.max_order;
  std::size_t lattice_cap = Limits{}.lattice_cap;
  double time_budget = Limits{}.time_budget_seconds;
  std::uint64_t seed = Limits{}.seed;
  std::string cache;
  std::size_t threads = 1;

  Limits limits() const {
    Limits l;
    l.max_order = max_order;
    l.lattice_cap = lattice_cap;
    l.table_cap = std::max(l.table_cap, lattice_cap);
    l.time_budget_seconds = time_budget;
    l.seed = seed;
    return l;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int severity(const Report& r) {
  if (r.error) {
    if (r.error->rfind("parse:", 0) == 0) return kParse;
    if (r.error->rfind("cap:", 0) == 0) return kCap;
    return kFailure;
  }
  return r.red_flag() ? kRedFlag : kOk;
}

int worst(int a, int b) {
  auto rank = [](int c) { return c == kRedFlag ? 4 : c == kParse ? 3 : c == kCap ? 2 : c == kFailure ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw InvalidArgument("cannot write " + out);
    f << j.dump(2) << "\n";
  }
}

/// An expression given inline, or the first expression of a file.
ExprPtr expression_arg(const std::string& arg) {
  if (fs::is_regular_file(arg)) {
    for (auto& pl : parse_lines(read_file(arg))) {
      if (!pl.expr) throw ParseError(pl.line, 1, pl.error);
      return pl.expr;
    }
    throw InvalidArgument("no expression in " + arg);
  }
  return parse(arg);
}

json verdict_json(const TheoremVerdict& v) {
  json j{{"theorem", theorem_tag(v.theorem)}, {"applicable", v.applicable}, {"case", v.case_number}, {"ok", v.ok}};
  if (!v.reason.empty()) j["reason"] = v.reason;
  j["evidence"] = v.evidence;
  j["matches"] = json::array();
  for (const auto& c : v.matches)
    j["matches"].push_back({{"case", c.number}, {"t", c.t}, {"v_order", c.v_order}, {"h_order", c.h_order},
                            {"h_abelian", c.h_abelian}, {"detail", c.detail}});
  return j;
}

json perms_json(const std::vector<Permutation>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

int cmd_build(const Globals& g, const std::string& file) {
  int code = kOk;
  for (auto& pl : parse_lines(read_file(file))) {
    if (!pl.expr) {
      std::cout << file << ":" << pl.error << "\n";
      code = worst(code, kParse);
      continue;
    }
    try {
      auto grp = evaluate(*pl.expr, g.limits());
      std::cout << pl.expr->to_string() << "\t" << grp.order() << "\t" << grp.degree() << "\t" << grp.fingerprint()
                << "\n";
    } catch (const CapExceeded& e) {
      std::cout << pl.expr->to_string() << "\tcap: " << e.what() << "\n";
      code = worst(code, kCap);
    } catch (const Error& e) {
      std::cout << pl.expr->to_string() << "\terror: " << e.what() << "\n";
      code = worst(code, kFailure);
    }
  }
  return code;
}

int cmd_invariants(const Globals& g, const std::string& arg, const std::string& out) {
  ReportCache cache = g.cache.empty() ? ReportCache() : ReportCache(g.cache);
  ReportOptions opt;
  opt.limits = g.limits();
  if (cache.enabled()) opt.cache = &cache;
  std::vector<Report> reports;
  if (fs::is_regular_file(arg)) {
    for (auto& pl : parse_lines(read_file(arg))) {
      if (pl.expr) {
        reports.push_back(compute_report(*pl.expr, opt));
      } else {
        Report r;
        r.id = pl.text;
        r.error = "parse: " + pl.error;
        reports.push_back(r);
      }
    }
  } else {
    reports.push_back(compute_report(arg, opt));
  }
  int code = kOk;
  json j = json::array();
  for (const auto& r : reports) {
    j.push_back(to_json(r));
    code = worst(code, severity(r));
  }
  emit(reports.size() == 1 ? j[0] : j, out);
  return code;
}

int cmd_verify(const Globals& g, const std::string& kind, const std::string& arg) {
  auto grp = evaluate(*expression_arg(arg), g.limits());
  Structure st(FiniteGroup::from_perm_group(grp, g.limits()), g.limits());
  DM dm = compute_dm(st);
  TheoremVerdict v = kind == "md-equal"     ? verify_md_equal(st, dm)
                     : kind == "nonsoluble" ? verify_nonsoluble(st, dm)
                                            : verify_soluble_cases(st, dm);
  json j = verdict_json(v);
  j["d"] = dm.d;
  j["m"] = dm.m;
  emit(j, "");
  return v.applicable && !v.ok ? kRedFlag : kOk;
}

int cmd_spectrum(const Globals& g, const std::string& arg) {
  auto grp = evaluate(*expression_arg(arg), g.limits());
  Structure st(FiniteGroup::from_perm_group(grp, g.limits()), g.limits());
  GenSearch gs(st);
  auto p = gs.spectrum();
  json j{{"d", p.d}, {"m", p.m}, {"spectrum", json::object()}};
  for (const auto& [k, w] : p.spectrum) j["spectrum"][std::to_string(k)] = perms_json(gs.to_permutations(w));
  emit(j, "");
  return kOk;
}

int cmd_phi(const Globals& g, const std::string& arg, std::size_t m) {
  auto grp = evaluate(*expression_arg(arg), g.limits());
  Structure st(FiniteGroup::from_perm_group(grp, g.limits()), g.limits());
  json j{{"m", m}, {"phi", eulerian_mobius(st, m)}};
  try {
    j["phi_brute"] = eulerian_brute(st.group(), m, g.limits());
  } catch (const CapExceeded&) {
    j["phi_brute"] = nullptr;
  }
  emit(j, "");
  return kOk;
}

int cmd_crown(const Globals& g, const std::string& arg, std::size_t k) {
  Limits lim = g.limits();
  auto l = evaluate(*expression_arg(arg), lim);
  Structure st(FiniteGroup::from_perm_group(l, lim), lim);
  auto a = st.group().perm_subgroup(st.socle());
  json j;
  std::uint64_t order = l.order();
  bool fits = true;
  for (std::size_t i = 1; i < k && fits; ++i) {
    fits = order <= lim.max_order / a.order();
    order *= a.order();
  }
  if (fits && order <= lim.max_order) {
    auto c = crown_power(l, a, k, lim);
    j = {{"order", c.order()}, {"degree", c.degree()}, {"generators", perms_json(c.generators())}};
    if (c.order() <= lim.table_cap) {
      Structure cs(FiniteGroup::from_perm_group(c, lim), lim);
      j["d"] = GenSearch(cs).d();
    }
  } else {
    j = {{"order", nullptr}, {"note", "crown power above the order cap; not constructed"}};
  }
  const auto& lg = st.group();
  if (st.socle().count() == lg.size() && !lg.is_abelian_set(lg.whole())) {
    auto chk = crown_generation_check(st, 2, k);
    j["check"] = {{"phi", chk.phi}, {"aut", chk.aut}, {"threshold", chk.threshold}, {"predicted_2_generated", chk.predicted}};
  }
  emit(j, "");
  return kOk;
}

int cmd_h1(const Globals& g, const std::string& arg, const std::string& module_file) {
  auto grp = evaluate(*expression_arg(arg), g.limits());
  auto fg = FiniteGroup::from_perm_group(grp, g.limits());
  json mj = json::parse(read_file(module_file));
  GfpModule m;
  m.prime = mj.at("prime").get<gfp::Scalar>();
  const auto& mats = mj.at("matrices");
  if (mats.size() != fg.generators().size())
    throw InvalidArgument("module lists " + std::to_string(mats.size()) + " matrices, the group has " +
                          std::to_string(fg.generators().size()) + " generators");
  if (mats.empty()) throw InvalidArgument("module needs at least one matrix");
  m.dimension = mats[0].size();
  for (const auto& rows : mats) {
    gfp::Matrix a(0, m.dimension);
    for (const auto& r : rows) {
      auto row = r.get<std::vector<gfp::Scalar>>();
      if (row.size() != m.dimension) throw InvalidArgument("module matrices must be square of equal size");
      for (auto& x : row) x %= m.prime;
      a.append_row(row);
    }
    if (a.rows() != m.dimension) throw InvalidArgument("module matrices must be square of equal size");
    m.action.push_back(a);
  }
  validate(fg, m);
  emit(json{{"prime", m.prime}, {"dimension", m.dimension}, {"h1", h1_dimension(fg, m, g.limits())}}, "");
  return kOk;
}

int cmd_corpus(const Globals& g, const std::string& dir, bool slow, const std::string& json_out,
               const std::string& csv_out) {
  ReportCache cache = g.cache.empty() ? ReportCache() : ReportCache(g.cache);
  CorpusOptions opt;
  opt.report.limits = g.limits();
  if (cache.enabled()) opt.report.cache = &cache;
  opt.threads = g.threads;
  opt.slow = slow;
  auto reports = run_corpus(dir, opt);
  json j = json::array();
  bool red = false;
  for (const auto& r : reports) {
    j.push_back(to_json(r));
    red = red || r.red_flag();
  }
  if (!csv_out.empty()) {
    std::ofstream f(csv_out);
    if (!f) throw InvalidArgument("cannot write " + csv_out);
    f << to_csv(reports);
  }
  if (!json_out.empty() || csv_out.empty()) emit(j, json_out);
  return red ? kRedFlag : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Independent generating sets of finite permutation groups"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--max-order", g.max_order, "Largest group order the builder accepts");
  app.add_option("--lattice-cap", g.lattice_cap, "Largest order for subgroup lattices and Cayley tables");
  app.add_option("--time-budget", g.time_budget, "Seconds per search before giving up");
  app.add_option("--seed", g.seed, "Seed for randomised probes");
  app.add_option("--cache", g.cache, "JSON-lines report cache");
  app.add_option("--threads", g.threads, "Worker threads for corpus runs")->check(CLI::PositiveNumber);

  std::string file, expr, out, kind, module_file, csv_out;
  std::size_t number = 0;
  bool slow = false;

  auto* build = app.add_subcommand("build", "Build every expression of a file and print order and degree");
  build->add_option("FILE", file)->required();
  auto* inv = app.add_subcommand("invariants", "Invariant report for an expression or a file of expressions");
  inv->add_option("EXPR", expr)->required();
  inv->add_option("--json", out, "Write JSON here instead of stdout");
  auto* ver = app.add_subcommand("verify", "Check one classification theorem on a group");
  ver->add_option("KIND", kind)->required()->check(CLI::IsMember({"md-equal", "nonsoluble", "soluble"}));
  ver->add_option("EXPR", expr)->required();
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Independent generating sets of every size");
  spectrum_cmd->add_option("EXPR", expr)->required();
  auto* phi = app.add_subcommand("phi", "Eulerian function phi_G(M)");
  phi->add_option("EXPR", expr)->required();
  phi->add_option("M", number)->required();
  auto* crown = app.add_subcommand("crown", "Crown-based power L_K of a monolithic group");
  crown->add_option("EXPR", expr)->required();
  crown->add_option("K", number)->required()->check(CLI::PositiveNumber);
  auto* h1 = app.add_subcommand("h1", "Dimension of H^1(G, M) for a module given as JSON");
  h1->add_option("EXPR", expr)->required();
  h1->add_option("MODULEFILE", module_file)->required();
  auto* corpus = app.add_subcommand("corpus", "Reports for every *.grp file of a directory");
  corpus->add_option("DIR", file)->required();
  corpus->add_flag("--slow", slow, "Also run *.slow.grp files");
  corpus->add_option("--json", out, "Write JSON here");
  corpus->add_option("--csv", csv_out, "Write the CSV projection here");
  for (auto* s : {build, inv, ver, spectrum_cmd, phi, crown, h1, corpus}) s->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(g, file);
    if (*inv) return cmd_invariants(g, expr, out);
    if (*ver) return cmd_verify(g, kind, expr);
    if (*spectrum_cmd) return cmd_spectrum(g, expr);
    if (*phi) return cmd_phi(g, expr, number);
    if (*crown) return cmd_crown(g, expr, number);
    if (*h1) return cmd_h1(g, expr, module_file);
    if (*corpus) return cmd_corpus(g, file, slow, out, csv_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
