#include <sstream>

#include <gtest/gtest.h>

#include "percmax/percmax.hpp"

using namespace percmax;

namespace {

std::string saved(const MemoTable& t) {
  std::ostringstream os;
  t.save(os);
  return os.str();
}

MemoTable loaded(const std::string& text) {
  std::istringstream is(text);
  return MemoTable::load(is);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    loaded(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(MoveTime, TableValues) {
  EXPECT_EQ(move_time(Move::m4, 8, 4), 10);
  EXPECT_EQ(move_time(Move::m1, 3, 8), 7);
  EXPECT_EQ(move_time(Move::m6, 12, 9), 23);
  EXPECT_EQ(move_time(Move::m2, 5, 4), 5);
  EXPECT_EQ(move_time(Move::m3, 5, 4), 6);
  EXPECT_EQ(move_time(Move::m5, 4, 6), 8);
  EXPECT_EQ(move_time(Move::m7, 9, 4), 7);
  EXPECT_THROW(move_time(Move::m7, 3, 4), DomainError);
  EXPECT_THROW(move_time(Move::m1, 1, 4), DomainError);
}

TEST(MoveTime, DeltasGrowSemiPerimeterByTwoOrThree) {
  for (Move m : kAllMoves) {
    Delta d = delta(m);
    EXPECT_GE(d.ds + d.dt, 2);
    EXPECT_LE(d.ds + d.dt, 3);
    EXPECT_EQ(move_from_id(move_id(m)), m);
  }
  EXPECT_THROW(move_from_id(8), DomainError);
}

TEST(MoveApplies, FourAndFiveNeedThreeOnTheShortGrowth) {
  EXPECT_FALSE(move_applies(Move::m4, 5, 3));
  EXPECT_TRUE(move_applies(Move::m4, 5, 4));
  EXPECT_FALSE(move_applies(Move::m5, 3, 5));
  EXPECT_TRUE(move_applies(Move::m5, 4, 5));
  EXPECT_FALSE(move_applies(Move::m7, 3, 5));
  EXPECT_TRUE(move_applies(Move::m1, 2, 2));
}

TEST(MaxTime, BaseCases) {
  MemoTable t;
  EXPECT_EQ(t.max_time(1, 1), 0);
  EXPECT_EQ(t.max_time(2, 1), 0);
  EXPECT_EQ(t.max_time(1, 2), 0);
  for (int k = 3; k < 50; ++k) EXPECT_EQ(t.max_time(k, 1), 1);
  EXPECT_EQ(t.max_time(7, 2), 9);
  EXPECT_EQ(t.max_time(2, 2), 1);
  EXPECT_EQ(t.max_time(3, 3), 4);
}

TEST(MaxTime, SmallValuesFromExhaustiveSearch) {
  MemoTable t;
  EXPECT_EQ(t.max_time(4, 4), 9);
  EXPECT_EQ(t.max_time(4, 3), 7);
  EXPECT_EQ(t.max_time(5, 3), 8);
  EXPECT_EQ(t.max_time(3, 5), 8);
  EXPECT_EQ(t.max_time(4, 5), 12);
}

TEST(MaxTime, RejectsNonPositiveDimensions) {
  MemoTable t;
  EXPECT_THROW(t.max_time(0, 3), DomainError);
  EXPECT_THROW(t.max_time(3, -1), DomainError);
  EXPECT_THROW(t.lookup(0, 1), DomainError);
}

TEST(MaxTime, Symmetric) {
  MemoTable t;
  for (int k = 1; k <= 40; ++k)
    for (int l = 1; l <= 40; ++l) EXPECT_EQ(t.max_time(k, l), t.max_time(l, k));
}

TEST(MaxTime, TwoRowClosedFormToTenThousand) {
  MemoTable t;
  for (std::int64_t k = 1; k <= 10000; ++k) ASSERT_EQ(t.max_time(k, 2), 3 * (k - 1) / 2) << k;
}

TEST(MaxTime, FillOrderDoesNotMatter) {
  MemoTable a, b;
  a.build_square(60);
  b.extend_sum(121);
  for (int k = 1; k <= 60; ++k)
    for (int l = k; l <= 60; ++l) EXPECT_EQ(a.lookup(k, l), b.lookup(k, l));
  MemoTable c;
  EXPECT_EQ(c.max_time(37, 23), a.lookup(23, 37));
}

TEST(MaxTime, LookupRequiresPresence) {
  MemoTable t;
  EXPECT_THROW(t.lookup(5, 5), DomainError);
  t.max_time(5, 5);
  EXPECT_TRUE(t.contains(5, 5));
  EXPECT_TRUE(t.contains(2, 4));
  EXPECT_FALSE(t.contains(5, 6));
}

TEST(ArgmaxMoves, FourByFour) {
  MemoTable t;
  auto ms = t.argmax_moves(4, 4);
  bool found = false;
  for (const auto& c : ms)
    if (c.increment == 5 && ((c.k_prev == 4 && c.l_prev == 2) || (c.k_prev == 2 && c.l_prev == 4))) found = true;
  EXPECT_TRUE(found);
}

TEST(ArgmaxMoves, EveryChoiceAttainsTheMaximum) {
  MemoTable t;
  for (int k = 3; k <= 40; ++k)
    for (int l = 3; l <= 40; ++l) {
      if (k == 3 && l == 3) continue;
      auto ms = t.argmax_moves(k, l);
      ASSERT_FALSE(ms.empty());
      for (const auto& c : ms) {
        EXPECT_EQ(t.max_time(c.k_prev, c.l_prev) + c.increment, t.max_time(k, l));
        EXPECT_EQ(c.increment, move_time(c.move, k, l));
        EXPECT_TRUE(move_applies(c.move, k, l));
      }
    }
  EXPECT_FALSE(t.argmax_moves(3, 4).empty());
}

TEST(ArgmaxMoves, SkipsMoveFourFromHeightTwo) {
  MemoTable t;
  for (const auto& c : t.argmax_moves(5, 3)) EXPECT_NE(c.move, Move::m4);
  for (const auto& c : t.argmax_moves(3, 5)) EXPECT_NE(c.move, Move::m5);
}

TEST(ArgmaxMoves, BaseDimensionsRejected) {
  MemoTable t;
  EXPECT_THROW(t.argmax_moves(3, 3), DomainError);
  EXPECT_THROW(t.argmax_moves(9, 2), DomainError);
  EXPECT_THROW(t.argmax_moves(1, 7), DomainError);
}

TEST(Monotonicity, HoldsOnSweeps) {
  MemoTable t;
  EXPECT_TRUE(t.monotonicity_check(2));
  EXPECT_TRUE(t.monotonicity_check(50));
  EXPECT_TRUE(t.monotonicity_check(2000));
}

TEST(Persistence, RoundTrip) {
  MemoTable t;
  t.build_square(30);
  MemoTable u = loaded(saved(t));
  EXPECT_EQ(t, u);
  EXPECT_EQ(saved(u), saved(t));
}

TEST(Persistence, EmptyTableRoundTrip) {
  MemoTable t;
  EXPECT_EQ(saved(t), "k,ell,M\n");
  EXPECT_EQ(loaded(saved(t)).size(), 0u);
}

TEST(Persistence, HundredSquareHas5050Entries) {
  MemoTable t;
  t.build_square(100);
  EXPECT_EQ(t.size(), 5050u);
  EXPECT_EQ(t.entries().size(), 5050u);
  EXPECT_NO_THROW(t.validate());
}

TEST(Persistence, RowsSortedBySumThenK) {
  MemoTable t;
  t.build_square(3);
  EXPECT_EQ(saved(t), "k,ell,M\n1,1,0\n1,2,0\n1,3,1\n2,2,1\n2,3,3\n3,3,4\n");
}

TEST(Persistence, FileRoundTrip) {
  MemoTable t;
  t.build_square(20);
  std::string path = ::testing::TempDir() + "memo_roundtrip.csv";
  t.save(path);
  EXPECT_EQ(MemoTable::load(path), t);
  EXPECT_THROW(MemoTable::load(path + ".missing"), DomainError);
}

TEST(Persistence, MalformedInputsReportTheLine) {
  EXPECT_EQ(parse_error_line(""), 1u);
  EXPECT_EQ(parse_error_line("k,l,M\n"), 1u);
  EXPECT_EQ(parse_error_line("k,ell,M\r\n1,1,0\r\n"), 1u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\n1,2,0\r\n"), 3u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\nx,2,0\n"), 3u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,2,0\n1,1,0\n"), 3u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\n2,1,0\n"), 3u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\n1,2,0\n1,3,2\n"), 4u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\n1,3,1\n"), 3u);
  EXPECT_EQ(parse_error_line("k,ell,M\n1,1,0\n\n"), 3u);
}

TEST(Persistence, TamperedRecursiveEntryRejected) {
  MemoTable t;
  t.build_square(6);
  std::string text = saved(t);
  auto pos = text.find("\n4,4,9\n");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 7, "\n4,4,8\n");
  EXPECT_THROW(loaded(text), ParseError);
}

TEST(Validate, FreshTableIsConsistent) {
  MemoTable t;
  t.build_square(12);
  EXPECT_NO_THROW(t.validate());
}

TEST(Values, SixtyFourBitStorage) {
  MemoTable t;
  static_assert(std::is_same_v<decltype(t.max_time(1, 1)), std::int64_t>);
  EXPECT_EQ(t.max_time(2, 100000), 149998);
}
