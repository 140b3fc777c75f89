#include <gtest/gtest.h>

#include "fingen/builder.hpp"
#include "fingen/verify.hpp"

using namespace fingen;

namespace {

Structure structure_of(const char* text) { return Structure(FiniteGroup::from_perm_group(build_group(text))); }

bool has_case(const TheoremVerdict& v, int c) {
  for (const auto& m : v.matches)
    if (m.number == c) return true;
  return false;
}

}  // namespace

TEST(MdEqual, ElementaryAbelian) {
  auto st = structure_of("D(C2,C2,C2)");
  auto v = verify_md_equal(st);
  EXPECT_TRUE(v.applicable);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.case_number, 1);
}

TEST(MdEqual, CrownOfS3) {
  auto st = structure_of("CROWN(S3,2)");
  auto dm = compute_dm(st);
  EXPECT_EQ(dm.d, 3u);
  EXPECT_EQ(dm.m, 3u);
  auto v = verify_md_equal(st, dm);
  EXPECT_TRUE(v.applicable);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.case_number, 2);
  ASSERT_FALSE(v.matches.empty());
  EXPECT_EQ(v.matches[0].t, 2u);
  EXPECT_EQ(v.matches[0].v_order, 3u);
  EXPECT_EQ(v.matches[0].h_order, 2u);
}

TEST(MdEqual, NotApplicable) {
  auto s4 = structure_of("S4");
  EXPECT_FALSE(verify_md_equal(s4).applicable);
  auto c4 = structure_of("C4");
  auto v = verify_md_equal(c4);
  EXPECT_FALSE(v.applicable);
  EXPECT_TRUE(v.ok);
}

TEST(Nonsoluble, A5) {
  auto st = structure_of("A5");
  auto v = verify_nonsoluble(st);
  EXPECT_TRUE(v.applicable);
  EXPECT_TRUE(v.ok) << v.reason;
  EXPECT_FALSE(verify_soluble_cases(st).applicable);
  auto s4 = structure_of("S4");
  EXPECT_FALSE(verify_nonsoluble(s4).applicable);
}

TEST(SolubleCases, S4IsCaseTwo) {
  auto st = structure_of("S4");
  auto v = verify_soluble_cases(st);
  EXPECT_TRUE(v.applicable);
  EXPECT_TRUE(v.ok);
  EXPECT_EQ(v.case_number, 2);
  EXPECT_EQ(v.matches[0].t, 1u);
  EXPECT_EQ(v.matches[0].h_order, 6u);
}

TEST(SolubleCases, Ex1IsCaseOne) {
  auto st = structure_of("EX1(2)");
  auto dm = compute_dm(st);
  EXPECT_EQ(dm.d, 3u);
  EXPECT_EQ(dm.m, 4u);
  auto v = verify_soluble_cases(st, dm);
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.case_number, 1);
  EXPECT_EQ(v.matches[0].h_order, 8u);
}

TEST(SolubleCases, CentralTimesS3IsCaseThree) {
  // C3 x S3: only the quotient by the central C3 has the V^t x| H shape
  auto st = structure_of("D(C3,S3)");
  auto dm = compute_dm(st);
  EXPECT_EQ(dm.d, 2u);
  EXPECT_EQ(dm.m, 3u);
  auto v = verify_soluble_cases(st, dm);
  EXPECT_TRUE(v.applicable);
  EXPECT_FALSE(has_case(v, 1));
  EXPECT_FALSE(has_case(v, 2));
  EXPECT_EQ(v.case_number, 3);
}

TEST(MdEqual, S3IsBulletTwo) {
  auto st = structure_of("S3");
  auto v = verify_md_equal(st);
  EXPECT_TRUE(v.applicable);
  EXPECT_EQ(v.case_number, 2);
  EXPECT_EQ(v.matches[0].t, 1u);
}

TEST(SolubleCases, FrattiniBlocksApplicability) {
  auto st = structure_of("Dih4");
  auto v = verify_soluble_cases(st);
  EXPECT_FALSE(v.applicable);
  EXPECT_EQ(v.reason, "Frattini subgroup is not trivial");
}

TEST(Verifiers, AtMostOneApplicable) {
  for (const char* s : {"C2", "C6", "S3", "S4", "A4", "A5", "D(C2,C2)", "EX1(1)", "EX2B(1)", "CROWN(S3,2)",
                        "SD(C7,C3,[g1->[g1^2]])", "D(S3,S3)"}) {
    auto st = structure_of(s);
    auto dm = compute_dm(st);
    int applicable = 0;
    for (const auto& v : verify_all(st, dm)) applicable += v.applicable;
    bool frat1 = st.frattini().count() == 1;
    bool gap = dm.m - dm.d <= 1;
    EXPECT_EQ(applicable, frat1 && gap ? 1 : 0) << s;
  }
}

TEST(SolubleCases, CyclicOfOrderPQ) {
  // d = 1, m = 2: neither case 1 (P cyclic) nor case 2 (no faithful V)
  for (const char* s : {"C6", "C10", "C15"}) {
    auto st = structure_of(s);
    auto v = verify_soluble_cases(st);
    EXPECT_TRUE(v.applicable) << s;
    EXPECT_TRUE(v.ok) << s;
    EXPECT_EQ(v.case_number, 3) << s;
    EXPECT_EQ(v.matches[0].t, 0u) << s;
  }
}
