#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "percmax/percmax.hpp"

using namespace percmax;

namespace {

Scheme sch(std::int64_t s0, std::int64_t t0, const std::string& moves) { return {s0, t0, moves_from_string(moves)}; }

constexpr std::int64_t kNone = -1;

// best[k][l]: the longest tail of moves from `tail` that ends at (n,n) when started from (k,l).
std::vector<std::vector<std::int64_t>> tail_table(int n, const std::vector<Move>& tail) {
  std::vector<std::vector<std::int64_t>> best(n + 1, std::vector<std::int64_t>(n + 1, kNone));
  best[n][n] = 0;
  for (int k = n; k >= 1; --k)
    for (int l = n; l >= 1; --l)
      for (Move m : tail) {
        int k2 = k + delta(m).ds, l2 = l + delta(m).dt;
        if (k2 > n || l2 > n || best[k2][l2] == kNone || !move_applies(m, k2, l2)) continue;
        best[k][l] = std::max(best[k][l], best[k2][l2] + move_time(m, k2, l2));
      }
  return best;
}

// Time of a prefix from (s0, t0) or kNone if some move cannot be used there.
std::int64_t prefix_time(int s0, int t0, const std::vector<Move>& moves, int& k, int& l) {
  k = s0;
  l = t0;
  std::int64_t t = base_time(s0, t0);
  for (Move m : moves) {
    k += delta(m).ds;
    l += delta(m).dt;
    if (!move_applies(m, k, l)) return kNone;
    t += move_time(m, k, l);
  }
  return t;
}

std::vector<Move> repeat(Move m, int times) { return std::vector<Move>(static_cast<std::size_t>(times), m); }

std::vector<Move> concat(std::initializer_list<std::vector<Move>> parts) {
  std::vector<Move> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Longest scheme (s0, 2, prefix tail) onto (n,n) over s0 >= 3 and the given prefixes, tail moves in 4..7.
std::int64_t best_with_prefixes(int n, const std::function<std::vector<std::vector<Move>>(int)>& prefixes) {
  auto tail = tail_table(n, {Move::m4, Move::m5, Move::m6, Move::m7});
  std::int64_t best = kNone;
  for (int s0 = 3; s0 <= n; ++s0)
    for (const auto& p : prefixes(n)) {
      int k, l;
      std::int64_t t = prefix_time(s0, 2, p, k, l);
      if (t == kNone || k > n || l > n || tail[k][l] == kNone) continue;
      best = std::max(best, t + tail[k][l]);
    }
  return best;
}

// Runs the process restricted to the first i moves of the scheme and returns the report.
InfectionReport<2> prefix_run(const Scheme& s, std::size_t i) {
  Scheme p{s.s0, s.t0, {s.moves.begin(), s.moves.begin() + static_cast<std::ptrdiff_t>(i)}};
  auto r = realize_scheme(p, cell(1, 1), VerifyMode::final_only);
  return simulate(r.seeds, box2(r.box.width, r.box.height));
}

}  // namespace

TEST(SchemeText, RoundTrip) {
  Scheme s = sch(2, 7, "1");
  EXPECT_EQ(to_string(s), "2 7 : 1");
  EXPECT_EQ(parse_scheme("2 7 : 1"), s);
  EXPECT_EQ(parse_scheme(to_string(sch(5, 2, "144466"))), sch(5, 2, "144466"));
  EXPECT_EQ(parse_scheme("3 2 :"), sch(3, 2, ""));
  EXPECT_THROW(parse_scheme("3 2 1"), ParseError);
  EXPECT_THROW(parse_scheme("3 2 : 8"), ParseError);
  EXPECT_THROW(parse_scheme("3 2 : 1 x"), ParseError);
  EXPECT_THROW(parse_scheme("0 2 : 1"), ParseError);
  EXPECT_THROW(moves_from_string("129"), DomainError);
}

TEST(SchemeDims, Examples) {
  EXPECT_EQ(scheme_dims(sch(2, 7, "1")), (std::pair<std::int64_t, std::int64_t>(3, 8)));
  EXPECT_EQ(scheme_dims(sch(3, 2, "")), (std::pair<std::int64_t, std::int64_t>(3, 2)));
  EXPECT_EQ(scheme_dims(sch(4, 2, "3311")), (std::pair<std::int64_t, std::int64_t>(6, 8)));
}

TEST(SchemeTime, PairedComparisons) {
  EXPECT_EQ(scheme_time(sch(3, 2, "333")), 15);
  EXPECT_EQ(scheme_time(sch(2, 7, "1")), 16);
  EXPECT_EQ(scheme_time(sch(2, 3, "155")), 25);
  EXPECT_EQ(scheme_time(sch(3, 2, "3311")), 24);
  EXPECT_EQ(scheme_time(sch(2, 7, "17")), 31);
  EXPECT_EQ(scheme_time(sch(4, 2, "3311")), 27);
  EXPECT_THROW(scheme_time(sch(4, 4, "1")), DomainError);
}

TEST(SchemeTime, SequenceMatchesTableOne) {
  Scheme s = sch(5, 2, "144466");
  TimeSeq ts = time_sequence(s);
  EXPECT_EQ(ts.base, 6);
  EXPECT_EQ(ts.steps, (std::vector<std::int64_t>{5, 10, 13, 16, 23, 23}));
  EXPECT_EQ(ts.total(), 96);
}

TEST(SchemeShape, WellFormedness) {
  EXPECT_TRUE(is_well_formed(sch(3, 2, "1")));
  EXPECT_FALSE(is_well_formed(sch(2, 2, "1")));
  EXPECT_FALSE(is_well_formed(sch(4, 4, "")));
  EXPECT_TRUE(is_well_formed(sch(3, 3, "")));
}

TEST(PairTime, TabulatedExamples) {
  for (int k = 6; k <= 12; ++k)
    for (int l = 6; l <= 12; ++l) {
      EXPECT_EQ(pair_time(Move::m6, Move::m4, k, l), 3 * k + l - 7);
      EXPECT_EQ(pair_time(Move::m7, Move::m1, k, l), std::max(k, l) + 2 * l - 4);
    }
  EXPECT_THROW(pair_time(Move::m7, Move::m7, 6, 5), DomainError);
}

TEST(PairTime, EqualsSumOfSingleMoves) {
  for (Move a : kAllMoves)
    for (Move b : kAllMoves)
      for (int k = 4; k <= 12; ++k)
        for (int l = 4; l <= 12; ++l) {
          Delta da = delta(a), db = delta(b);
          if (k - da.ds - db.ds < 1 || l - da.dt - db.dt < 1) continue;
          std::int64_t sum = move_time(b, k, l) + move_time(a, k - db.ds, l - db.dt);
          EXPECT_EQ(pair_time(a, b, k, l), sum) << move_id(a) << move_id(b) << " at " << k << "x" << l;
        }
}

TEST(Compatible, Examples) {
  EXPECT_TRUE(compatible(moves_from_string("61"), moves_from_string("35")));
  EXPECT_TRUE(compatible(moves_from_string("111"), moves_from_string("45")));
  EXPECT_FALSE(compatible(moves_from_string("12"), moves_from_string("13")));
  EXPECT_TRUE(compatible({}, {}));
}

TEST(FindScheme, TwoRowTargetsAreBases) {
  MemoTable memo;
  for (int k = 1; k <= 30; ++k) {
    Scheme s = find_scheme(k, 2, memo);
    EXPECT_EQ(s, sch(k, 2, ""));
    EXPECT_EQ(scheme_time(s), 3 * (k - 1) / 2);
  }
}

TEST(FindScheme, AttainsTheMaximum) {
  MemoTable memo;
  for (int k = 1; k <= 40; ++k)
    for (int l = 1; l <= 40; ++l) {
      Scheme s = find_scheme(k, l, memo);
      EXPECT_EQ(scheme_dims(s), (std::pair<std::int64_t, std::int64_t>(k, l)));
      EXPECT_EQ(scheme_time(s), memo.max_time(k, l));
      EXPECT_TRUE(is_well_formed(s) || s.moves.empty());
    }
  EXPECT_EQ(scheme_time(find_scheme(12, 12, memo)), memo.max_time(12, 12));
  EXPECT_EQ(scheme_time(find_scheme(5, 4, memo)), 12);
}

TEST(FindScheme, BasesAvoidThinAndThreeByThreeStarts) {
  MemoTable memo;
  for (int k = 3; k <= 60; ++k)
    for (int l = 3; l <= 60; ++l) {
      if (k == 3 && l == 3) continue;
      Scheme s = find_scheme(k, l, memo);
      EXPECT_GE(s.s0, 2);
      EXPECT_GE(s.t0, 2);
      EXPECT_FALSE(s.s0 == 3 && s.t0 == 3) << k << "x" << l;
    }
}

TEST(FindScheme, Deterministic) {
  MemoTable a, b;
  b.build_square(50);
  for (int n = 3; n <= 50; ++n) EXPECT_EQ(find_scheme(n, n, a), find_scheme(n, n, b));
}

TEST(NormalForms, Validators) {
  EXPECT_TRUE(in_small_move_form(sch(3, 2, "2213")));
  EXPECT_TRUE(in_small_move_form(sch(3, 2, "3112")));
  EXPECT_FALSE(in_small_move_form(sch(3, 2, "231")));
  EXPECT_FALSE(in_small_move_form(sch(3, 2, "4")));
  EXPECT_TRUE(in_sorted_form(sch(5, 2, "144466")));
  EXPECT_TRUE(in_sorted_form(sch(5, 2, "3312274")));
  EXPECT_FALSE(in_sorted_form(sch(2, 5, "1")));
  EXPECT_FALSE(in_sorted_form(sch(5, 2, "414")));
  EXPECT_TRUE(in_short_prefix_form(sch(5, 2, "1334567")));
  EXPECT_TRUE(in_short_prefix_form(sch(5, 2, "33122226")));
  EXPECT_FALSE(in_short_prefix_form(sch(5, 2, "114")));
  EXPECT_FALSE(in_short_prefix_form(sch(5, 2, "3334")));
}

TEST(NormalForms, ThreeSmallMovesThenLargeOnesSolveEveryRectangle) {
  MemoTable memo;
  const int n = 30;
  // head[k][l]: longest time to reach (k,l) from a (s0,2) or (2,t0) base with moves 1..3
  std::map<std::pair<int, int>, std::int64_t> head;
  for (int b = 3; b <= n; ++b) {
    head[{b, 2}] = base_time(b, 2);
    head[{2, b}] = base_time(2, b);
  }
  for (int sum = 5; sum <= 2 * n; ++sum)
    for (int k = 1; k < sum && k <= n; ++k) {
      int l = sum - k;
      if (l > n) continue;
      for (Move m : {Move::m1, Move::m2, Move::m3}) {
        int kp = k - delta(m).ds, lp = l - delta(m).dt;
        auto it = head.find({kp, lp});
        if (it == head.end() || !move_applies(m, k, l)) continue;
        auto v = it->second + move_time(m, k, l);
        auto& slot = head[{k, l}];
        slot = std::max(slot, v);
      }
    }
  auto full = head;
  for (int sum = 5; sum <= 2 * n; ++sum)
    for (int k = 1; k < sum && k <= n; ++k) {
      int l = sum - k;
      if (l > n) continue;
      for (Move m : {Move::m4, Move::m5, Move::m6, Move::m7}) {
        int kp = k - delta(m).ds, lp = l - delta(m).dt;
        auto it = full.find({kp, lp});
        if (it == full.end() || !move_applies(m, k, l)) continue;
        auto v = it->second + move_time(m, k, l);
        auto& slot = full[{k, l}];
        slot = std::max(slot, v);
      }
    }
  for (int k = 3; k <= n; ++k)
    for (int l = 3; l <= n; ++l) {
      if (k == 3 && l == 3) continue;
      EXPECT_EQ((full[{k, l}]), memo.max_time(k, l)) << k << "x" << l;
    }
}

TEST(NormalForms, SortedPrefixSolvesSquares) {
  MemoTable memo;
  for (int n = 4; n <= 30; ++n) {
    auto prefixes = [](int n) {
      std::vector<std::vector<Move>> out;
      for (int a = 0; a <= n; ++a)
        for (int b = 0; a + 2 * b <= n; ++b) {
          out.push_back(concat({repeat(Move::m1, a), repeat(Move::m3, b)}));
          for (int c = 0; a + 2 * b + 2 * c <= 2 * n; ++c)
            out.push_back(concat({repeat(Move::m3, b), repeat(Move::m1, a), repeat(Move::m2, c)}));
        }
      return out;
    };
    EXPECT_EQ(best_with_prefixes(n, prefixes), memo.max_time(n, n)) << n;
  }
}

TEST(NormalForms, ShortPrefixSolvesSquares) {
  MemoTable memo;
  for (int n = 4; n <= 60; ++n) {
    auto prefixes = [](int n) {
      std::vector<std::vector<Move>> out;
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 2; ++b) {
          out.push_back(concat({repeat(Move::m1, a), repeat(Move::m3, b)}));
          for (int c = 0; 2 * c <= n; ++c)
            out.push_back(concat({repeat(Move::m3, b), repeat(Move::m1, a), repeat(Move::m2, c)}));
        }
      return out;
    };
    EXPECT_EQ(best_with_prefixes(n, prefixes), memo.max_time(n, n)) << n;
  }
}

TEST(Realize, TwoRowBase) {
  auto r = realize_scheme(sch(6, 2, ""));
  EXPECT_EQ(r.seeds, CellSet<2>(detail::two_row_base(6)));
  EXPECT_EQ(simulate(r.seeds, box2(6, 2)).total_time, StepTime(7));
}

TEST(Realize, SingleMoveOneAddsADiagonalSeed) {
  auto r = realize_scheme(sch(3, 2, "1"));
  EXPECT_EQ(simulate(r.seeds, box2(4, 3)).total_time, StepTime(6));
  int found = 0;
  for (const auto& v : r.seeds) {
    std::vector<Cell> rest;
    for (const auto& c : r.seeds)
      if (c != v) rest.push_back(c);
    auto cl = closure(CellSet<2>(rest), box2(4, 3));
    auto bb = cl.bounding_box();
    if (!bb || cl.size() != 6u || bb->second.x() - bb->first.x() != 2) continue;
    Rect p = make_rect(bb->first.x(), bb->first.y(), 3, 2);
    int corner_hits = 0;
    for (const Cell& c : {cell(p.x0(), p.y0()), cell(p.x1(), p.y0()), cell(p.x0(), p.y1()), cell(p.x1(), p.y1())})
      corner_hits += l1_distance(c, v) == 2;
    EXPECT_EQ(corner_hits, 1);
    EXPECT_GE(set_distance(CellSet<2>{v}, cl), 2);
    ++found;
  }
  EXPECT_EQ(found, 1);
}

TEST(Realize, MoveThreeAfterFiveByTwo) {
  auto r = realize_scheme(sch(5, 2, "3"));
  EXPECT_EQ(simulate(r.seeds, box2(5, 4)).total_time, StepTime(12));
  EXPECT_EQ(r.verified_totals, (std::vector<std::int64_t>{12}));
}

TEST(Realize, AnchorTranslates) {
  auto a = realize_scheme(sch(5, 2, "14"));
  auto b = realize_scheme(sch(5, 2, "14"), cell(4, 7));
  EXPECT_EQ(b.seeds, a.seeds.translated(cell(3, 6)));
  EXPECT_EQ(b.box, make_rect(4, 7, 8, 4));
}

TEST(Realize, MoveFourFromHeightTwoIsNotRealizable) {
  EXPECT_THROW(realize_scheme(sch(3, 2, "4")), ConsistencyError);
  EXPECT_THROW(realize_scheme(sch(2, 3, "5")), ConsistencyError);
  EXPECT_THROW(realize_scheme(sch(4, 4, "1")), DomainError);
}

TEST(Realize, ThreeByThreeAndThinBases) {
  EXPECT_EQ(simulate(realize_scheme(sch(3, 3, "")).seeds, box2(3, 3)).total_time, StepTime(4));
  EXPECT_EQ(simulate(realize_scheme(sch(7, 1, "")).seeds, box2(7, 1)).total_time, StepTime(1));
  EXPECT_EQ(simulate(realize_scheme(sch(1, 8, "")).seeds, box2(1, 8)).total_time, StepTime(1));
  EXPECT_EQ(simulate(realize_scheme(sch(2, 9, "")).seeds, box2(2, 9)).total_time, StepTime(12));
}

TEST(PerfectSet, ThreeByThree) {
  auto a = perfect_set(3, 3);
  EXPECT_EQ(simulate(a, box2(3, 3)).total_time, StepTime(4));
}

TEST(PerfectSet, SquaresUpToForty) {
  MemoTable memo;
  for (int n = 1; n <= 40; ++n) {
    auto a = perfect_set(n, n, memo);
    EXPECT_EQ(simulate(a, box2(n, n)).total_time, StepTime(memo.max_time(n, n))) << n;
  }
}

TEST(PerfectSet, AtMostTwoNewSitesPerStepAfterTheBase) {
  MemoTable memo;
  for (int k = 3; k <= 30; ++k)
    for (int l = 3; l <= 30; ++l) {
      Realization r = perfect_realization(k, l, memo, VerifyMode::final_only);
      auto rep = simulate(r.seeds, box2(k, l));
      for (std::size_t t = static_cast<std::size_t>(r.times.base); t < rep.step_counts.size(); ++t)
        ASSERT_LE(rep.step_counts[t], 2u) << k << "x" << l << " step " << t + 1;
    }
}

TEST(PerfectSet, SomeCornerIsInfectedLast) {
  MemoTable memo;
  for (int k = 2; k <= 30; ++k)
    for (int l = 2; l <= 30; ++l) {
      auto rep = simulate(perfect_set(k, l, memo, VerifyMode::final_only), box2(k, l));
      auto last = rep.total_time;
      bool corner = rep.time(cell(1, 1)) == last || rep.time(cell(k, 1)) == last || rep.time(cell(1, l)) == last ||
                    rep.time(cell(k, l)) == last;
      EXPECT_TRUE(corner) << k << "x" << l;
    }
}

TEST(PerfectSet, MoveOneSegmentsEndWithSingleSiteSteps) {
  MemoTable memo;
  for (int k = 3; k <= 24; ++k)
    for (int l = 3; l <= 24; ++l) {
      Scheme s = find_scheme(k, l, memo);
      std::int64_t sk = s.s0, sl = s.t0;
      for (std::size_t i = 0; i < s.moves.size(); ++i) {
        std::int64_t pk = sk, pl = sl;
        sk += delta(s.moves[i]).ds;
        sl += delta(s.moves[i]).dt;
        if (s.moves[i] != Move::m1) continue;
        auto before = prefix_run(s, i);
        auto after = prefix_run(s, i + 1);
        std::size_t from = static_cast<std::size_t>(before.total_time.value());
        std::size_t to = static_cast<std::size_t>(after.total_time.value());
        std::size_t singles = static_cast<std::size_t>(std::abs(pk - pl));
        ASSERT_GE(to - from, singles);
        for (std::size_t t = from; t < to; ++t) {
          bool in_tail = t >= to - singles;
          EXPECT_EQ(after.step_counts[t] == 1, in_tail)
              << to_string(s) << " move " << i + 1 << " step " << t + 1;
        }
      }
    }
}
