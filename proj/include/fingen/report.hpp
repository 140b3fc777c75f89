#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "builder.hpp"
#include "genset.hpp"
#include "verify.hpp"

namespace fingen {

struct ChiefSummary {
  std::size_t order = 0;
  bool abelian = false;
  bool frattini = false;
  unsigned prime = 0;   // 0 for non-abelian factors
  std::size_t dim = 0;  // dimension, or the number of simple copies
  bool operator==(const ChiefSummary&) const = default;
};

struct VerdictSummary {
  std::string theorem;
  bool applicable = false;
  int case_number = 0;
  bool ok = true;
  bool operator==(const VerdictSummary&) const = default;
};

/// Invariants of one group. Fields that could not be computed stay empty
/// and `error` says why ("parse: ...", "cap: ...", "invalid: ...").
struct Report {
  int schema = 1;
  std::string id;
  std::string fingerprint;
  std::uint64_t order = 0;
  std::size_t degree = 0;
  std::optional<bool> soluble;
  std::optional<std::size_t> d, m, a, b;
  std::vector<std::size_t> spectrum;
  std::vector<ChiefSummary> chief_factors;
  std::vector<VerdictSummary> verdicts;
  std::optional<std::string> error;
  nlohmann::json timings = nlohmann::json::object();

  bool red_flag() const {
    for (const auto& v : verdicts)
      if (v.applicable && !v.ok) return true;
    return false;
  }
  bool same_invariants(const Report& o) const {
    return order == o.order && degree == o.degree && soluble == o.soluble && d == o.d && m == o.m && a == o.a &&
           b == o.b && spectrum == o.spectrum && chief_factors == o.chief_factors && verdicts == o.verdicts &&
           fingerprint == o.fingerprint;
  }
};

namespace detail {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> opt_get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace detail

/// JSON form; timings only when requested, so that the rest is stable.
inline nlohmann::json to_json(const Report& r, bool with_timings = true) {
  nlohmann::json j;
  j["schema"] = r.schema;
  j["id"] = r.id;
  j["fingerprint"] = r.fingerprint;
  j["order"] = r.order;
  j["degree"] = r.degree;
  j["soluble"] = detail::opt(r.soluble);
  j["d"] = detail::opt(r.d);
  j["m"] = detail::opt(r.m);
  j["a"] = detail::opt(r.a);
  j["b"] = detail::opt(r.b);
  j["spectrum"] = r.spectrum;
  j["chief_factors"] = nlohmann::json::array();
  for (const auto& f : r.chief_factors)
    j["chief_factors"].push_back(
        {{"order", f.order}, {"abelian", f.abelian}, {"frattini", f.frattini}, {"prime", f.prime}, {"dim", f.dim}});
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : r.verdicts)
    j["verdicts"].push_back({{"theorem", v.theorem}, {"applicable", v.applicable}, {"case", v.case_number}, {"ok", v.ok}});
  if (r.error) j["error"] = *r.error;
  if (with_timings && !r.timings.empty()) j["timings"] = r.timings;
  return j;
}

inline Report report_from_json(const nlohmann::json& j) {
  if (j.at("schema").get<int>() != 1) throw InvalidArgument("unsupported report schema");
  Report r;
  r.id = j.at("id").get<std::string>();
  r.fingerprint = j.at("fingerprint").get<std::string>();
  r.order = j.at("order").get<std::uint64_t>();
  r.degree = j.at("degree").get<std::size_t>();
  r.soluble = detail::opt_get<bool>(j, "soluble");
  r.d = detail::opt_get<std::size_t>(j, "d");
  r.m = detail::opt_get<std::size_t>(j, "m");
  r.a = detail::opt_get<std::size_t>(j, "a");
  r.b = detail::opt_get<std::size_t>(j, "b");
  r.spectrum = j.at("spectrum").get<std::vector<std::size_t>>();
  for (const auto& f : j.at("chief_factors"))
    r.chief_factors.push_back({f.at("order").get<std::size_t>(), f.at("abelian").get<bool>(),
                               f.at("frattini").get<bool>(), f.at("prime").get<unsigned>(),
                               f.at("dim").get<std::size_t>()});
  for (const auto& v : j.at("verdicts"))
    r.verdicts.push_back({v.at("theorem").get<std::string>(), v.at("applicable").get<bool>(), v.at("case").get<int>(),
                          v.at("ok").get<bool>()});
  r.error = detail::opt_get<std::string>(j, "error");
  if (j.contains("timings")) r.timings = j.at("timings");
  return r;
}

/// Report cache: one JSON report per line, keyed by fingerprint. Appends
/// take an exclusive advisory lock on the file.
class ReportCache {
 public:
  ReportCache() = default;
  explicit ReportCache(std::string path) : path_(std::move(path)) { load(); }

  bool enabled() const { return !path_.empty(); }

  std::optional<Report> find(const std::string& fingerprint) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(fingerprint);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void store(const Report& r) {
    if (!enabled() || r.error) return;
    std::string line = to_json(r, false).dump() + "\n";
    std::lock_guard lock(mu_);
    if (entries_.count(r.fingerprint)) return;
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw Error("cannot open cache " + path_);
    ::flock(fd, LOCK_EX);
    ssize_t written = ::write(fd, line.data(), line.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (written != static_cast<ssize_t>(line.size())) throw Error("short write to cache " + path_);
    entries_.emplace(r.fingerprint, r);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      try {
        Report r = report_from_json(nlohmann::json::parse(line));
        entries_.emplace(r.fingerprint, std::move(r));
      } catch (const std::exception& e) {
        std::cerr << "warning: skipping corrupt cache line " << n << " of " << path_ << ": " << e.what() << "\n";
      }
    }
  }

  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, Report> entries_;
};

struct ReportOptions {
  Limits limits;
  bool verify = true;
  ReportCache* cache = nullptr;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

inline void fill_invariants(Report& r, const PermGroup& g, const ReportOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  r.soluble = is_soluble(g);
  Structure st(FiniteGroup::from_perm_group(g, opt.limits), opt.limits);
  auto cs = st.chief_series();
  for (const auto& f : cs.factors)
    r.chief_factors.push_back({f.order(), f.abelian, f.frattini, f.abelian ? f.prime : 0u,
                               f.abelian ? f.dimension : f.copies});
  r.a = cs.a();
  r.b = cs.b();
  GenSearch gs(st);
  auto prof = gs.spectrum();
  r.d = prof.d;
  r.m = prof.m;
  for (const auto& [k, w] : prof.spectrum) r.spectrum.push_back(k);
  r.timings["invariants"] = seconds_since(t0);
  if (opt.verify) {
    const auto t1 = std::chrono::steady_clock::now();
    for (const auto& v : verify_all(st, DM{prof.d, prof.m}))
      r.verdicts.push_back({theorem_tag(v.theorem), v.applicable, v.case_number, v.ok});
    r.timings["verify"] = seconds_since(t1);
  }
}

}  // namespace detail

/// Builds the group and computes its report. Never throws for problems
/// with the group itself; those land in `error`.
inline Report compute_report(const Expr& e, const ReportOptions& opt = {}) {
  Report r;
  r.id = e.to_string();
  const auto t0 = std::chrono::steady_clock::now();
  PermGroup g;
  try {
    g = evaluate(e, opt.limits);
  } catch (const CapExceeded& ex) {
    r.error = std::string("cap: ") + ex.what();
    return r;
  } catch (const Error& ex) {
    r.error = std::string("invalid: ") + ex.what();
    return r;
  }
  r.timings["build"] = detail::seconds_since(t0);
  r.fingerprint = g.fingerprint();
  r.order = g.order();
  r.degree = g.degree();
  if (opt.cache) {
    if (auto hit = opt.cache->find(r.fingerprint)) {
      Report c = *hit;
      c.id = r.id;
      c.timings = {{"cached", true}};
      return c;
    }
  }
  try {
    detail::fill_invariants(r, g, opt);
  } catch (const CapExceeded& ex) {
    r.error = std::string("cap: ") + ex.what();
    return r;
  } catch (const Error& ex) {
    r.error = std::string("invalid: ") + ex.what();
    return r;
  }
  if (opt.cache) opt.cache->store(r);
  return r;
}

inline Report compute_report(std::string_view text, const ReportOptions& opt = {}) {
  ExprPtr e;
  try {
    e = parse(text);
  } catch (const ParseError& ex) {
    Report r;
    r.id = std::string(text);
    r.error = std::string("parse: ") + ex.what();
    return r;
  }
  return compute_report(*e, opt);
}

struct CorpusOptions {
  ReportOptions report;
  std::size_t threads = 1;
  bool slow = false;   // include *.slow.grp files
};

/// Every expression of every *.grp file under `dir` (one per line), merged
/// by (fingerprint, id). Failures stay local to their report.
inline std::vector<Report> run_corpus(const std::filesystem::path& dir, const CorpusOptions& opt = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InvalidArgument("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto& p = entry.path();
    if (!entry.is_regular_file() || p.extension() != ".grp") continue;
    bool slow = p.stem().extension() == ".slow";
    if (slow && !opt.slow) continue;
    files.push_back(p);
  }
  std::sort(files.begin(), files.end());

  struct Task {
    std::string source;
    ExprPtr expr;
    std::string text;
    std::string parse_error;
  };
  std::vector<Task> tasks;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    for (auto& pl : parse_lines(ss.str()))
      tasks.push_back({f.filename().string() + ":" + std::to_string(pl.line), pl.expr, pl.text, pl.error});
  }

  std::vector<Report> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& t = tasks[i];
      if (!t.expr) {
        out[i].id = t.text;
        out[i].error = "parse: " + t.source + ": " + t.parse_error;
        continue;
      }
      out[i] = compute_report(*t.expr, opt.report);
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(opt.threads, tasks.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::stable_sort(out.begin(), out.end(), [](const Report& x, const Report& y) {
    return std::tie(x.fingerprint, x.id) < std::tie(y.fingerprint, y.id);
  });
  return out;
}

/// CSV projection of reports, one row each.
inline std::string to_csv(const std::vector<Report>& reports) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
  std::string out = "id,fingerprint,order,degree,soluble,d,m,a,b,spectrum,verdicts,error\n";
  for (const auto& r : reports) {
    std::string spectrum_col, verd;
    for (auto k : r.spectrum) spectrum_col += (spectrum_col.empty() ? "" : " ") + std::to_string(k);
    for (const auto& v : r.verdicts)
      if (v.applicable)
        verd += (verd.empty() ? "" : " ") + v.theorem + ":" + std::to_string(v.case_number) + (v.ok ? ":ok" : ":red");
    out += quote(r.id) + "," + r.fingerprint + "," + std::to_string(r.order) + "," + std::to_string(r.degree) + "," +
           (r.soluble ? (*r.soluble ? "true" : "false") : "") + "," + opt(r.d) + "," + opt(r.m) + "," + opt(r.a) +
           "," + opt(r.b) + "," + spectrum_col + "," + verd + "," + quote(r.error.value_or("")) + "\n";
  }
  return out;
}

}  // namespace fingen
