#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fingen/report.hpp"

using namespace fingen;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fingen_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Report, Fields) {
  auto r = compute_report("S4");
  ASSERT_FALSE(r.error) << *r.error;
  EXPECT_EQ(r.order, 24u);
  EXPECT_EQ(r.degree, 4u);
  EXPECT_EQ(*r.d, 2u);
  EXPECT_EQ(*r.m, 3u);
  EXPECT_EQ(*r.a, 3u);
  EXPECT_EQ(*r.b, 0u);
  EXPECT_EQ(r.spectrum, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(r.chief_factors.size(), 3u);
  EXPECT_EQ(r.chief_factors[0].order, 4u);
  EXPECT_EQ(r.chief_factors[0].dim, 2u);
  ASSERT_EQ(r.verdicts.size(), 3u);
  EXPECT_TRUE(r.verdicts[2].applicable);
  EXPECT_EQ(r.verdicts[2].case_number, 2);
  EXPECT_FALSE(r.red_flag());
}

TEST(Report, JsonRoundTrip) {
  for (const char* s : {"A5", "EX1(2)", "Dih4", "C1", "D(S3,"}) {
    auto r = compute_report(s);
    auto j = to_json(r);
    auto back = report_from_json(j);
    EXPECT_EQ(to_json(back).dump(), j.dump()) << s;
  }
  auto j = to_json(compute_report("S4"));
  for (const char* key : {"schema", "id", "fingerprint", "order", "degree", "soluble", "d", "m", "a", "b", "spectrum",
                          "chief_factors", "verdicts"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["schema"], 1);
}

TEST(Report, Errors) {
  auto p = compute_report("D(S3,");
  ASSERT_TRUE(p.error);
  EXPECT_EQ(p.error->rfind("parse: ", 0), 0u);
  ReportOptions small;
  small.limits.max_order = 100;
  auto c = compute_report("S6", small);
  ASSERT_TRUE(c.error);
  EXPECT_EQ(c.error->rfind("cap: ", 0), 0u);
  auto i = compute_report("SD(C5,C2,[g1->[g1^2]])");
  ASSERT_TRUE(i.error);
  EXPECT_EQ(i.error->rfind("invalid: ", 0), 0u);
  // above the table cap the permutation-level fields are still filled in
  auto w = compute_report("WREATH(1)");
  ASSERT_TRUE(w.error);
  EXPECT_EQ(w.order, 112'896u);
  EXPECT_FALSE(w.d);
}

TEST(Report, Deterministic) {
  for (const char* s : {"EX2B(2)", "CROWN(S3,3)", "A5"}) {
    auto a = to_json(compute_report(s), false).dump();
    auto b = to_json(compute_report(s), false).dump();
    EXPECT_EQ(a, b) << s;
  }
}

TEST(Cache, SoundAndSkipsCorruptLines) {
  auto dir = fresh_dir("cache");
  auto path = (dir / "cache.jsonl").string();
  ReportOptions opt;
  {
    ReportCache cache(path);
    opt.cache = &cache;
    auto fresh = compute_report("EX1(1)", opt);
    EXPECT_EQ(cache.size(), 1u);
    auto again = compute_report("D(S3,C2)", opt);  // same generators, different text
    EXPECT_TRUE(again.same_invariants(fresh));
    EXPECT_EQ(again.id, "D(S3,C2)");
    EXPECT_TRUE(again.timings.contains("cached"));
  }
  { std::ofstream(path, std::ios::app) << "{not json\n"; }
  ReportCache reloaded(path);
  EXPECT_EQ(reloaded.size(), 1u);
  opt.cache = &reloaded;
  auto hit = compute_report("EX1(1)", opt);
  auto plain = compute_report("EX1(1)");
  EXPECT_TRUE(hit.same_invariants(plain));
  fs::remove_all(dir);
}

TEST(Corpus, IsolatesFailuresAndMerges) {
  auto dir = fresh_dir("corpus");
  write(dir / "a.grp", "# small\nS3\nC4\n");
  write(dir / "b.grp", "S4\nD(S3,\n");
  write(dir / "c.slow.grp", "A5\n");
  write(dir / "notes.txt", "S5\n");
  CorpusOptions opt;
  opt.threads = 3;
  auto rs = run_corpus(dir, opt);
  ASSERT_EQ(rs.size(), 4u);
  std::size_t errors = 0;
  for (const auto& r : rs) errors += r.error.has_value();
  EXPECT_EQ(errors, 1u);
  for (std::size_t i = 1; i < rs.size(); ++i) EXPECT_LE(rs[i - 1].fingerprint, rs[i].fingerprint);
  opt.slow = true;
  EXPECT_EQ(run_corpus(dir, opt).size(), 5u);
  opt.threads = 1;
  opt.slow = false;
  auto single = run_corpus(dir, opt);
  for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_EQ(to_json(single[i], false), to_json(rs[i], false));
  auto csv = to_csv(rs);
  EXPECT_EQ(csv.rfind("id,fingerprint,order", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  fs::remove_all(dir);
}

TEST(Corpus, EmptyAndMissing) {
  auto dir = fresh_dir("empty");
  EXPECT_TRUE(run_corpus(dir).empty());
  EXPECT_THROW(run_corpus(dir / "nope"), InvalidArgument);
  fs::remove_all(dir);
}
