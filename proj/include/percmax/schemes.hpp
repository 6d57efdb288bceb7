#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "percmax/engine.hpp"
#include "percmax/moves.hpp"
#include "percmax/oracle.hpp"
#include "percmax/recurrence.hpp"

namespace percmax {

struct Scheme {
  std::int64_t s0 = 1;
  std::int64_t t0 = 1;
  std::vector<Move> moves;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

inline std::string move_string(const std::vector<Move>& moves) {
  std::string s;
  for (Move m : moves) s += static_cast<char>('0' + move_id(m));
  return s;
}

inline std::vector<Move> moves_from_string(const std::string& digits) {
  std::vector<Move> out;
  for (char c : digits) {
    if (c < '1' || c > '7') throw DomainError(std::string("bad move digit '") + c + "'");
    out.push_back(move_from_id(c - '0'));
  }
  return out;
}

/// Text form "s0 t0 : m1 m2 ...".
inline std::string to_string(const Scheme& s) {
  std::string out = std::to_string(s.s0) + " " + std::to_string(s.t0) + " :";
  for (Move m : s.moves) out += " " + std::to_string(move_id(m));
  return out;
}

inline Scheme parse_scheme(const std::string& text) {
  std::istringstream ss(text);
  Scheme s;
  std::string colon;
  if (!(ss >> s.s0 >> s.t0 >> colon) || colon != ":") throw ParseError(1, "expected 's0 t0 : moves'");
  if (s.s0 < 1 || s.t0 < 1) throw ParseError(1, "base dimensions must be positive");
  int id;
  while (ss >> id) {
    if (id < 1 || id > 7) throw ParseError(1, "move id out of range: " + std::to_string(id));
    s.moves.push_back(move_from_id(id));
  }
  if (!ss.eof()) throw ParseError(1, "trailing garbage in scheme");
  return s;
}

inline bool is_valid_base(std::int64_t s0, std::int64_t t0) {
  return s0 >= 1 && t0 >= 1 && is_base_dims(s0, t0);
}

inline std::pair<std::int64_t, std::int64_t> scheme_dims(const Scheme& s) {
  std::int64_t k = s.s0, l = s.t0;
  for (Move m : s.moves) {
    k += delta(m).ds;
    l += delta(m).dt;
  }
  return {k, l};
}

/// Base must be a base rectangle; after the first move both sides are at least 3 and not 3 x 3.
inline bool is_well_formed(const Scheme& s) {
  if (!is_valid_base(s.s0, s.t0)) return false;
  if (s.moves.empty()) return true;
  std::int64_t k = s.s0 + delta(s.moves[0]).ds, l = s.t0 + delta(s.moves[0]).dt;
  return k >= 3 && l >= 3 && !(k == 3 && l == 3);
}

struct TimeSeq {
  std::int64_t base = 0;
  std::vector<std::int64_t> steps;  // T_1 ... T_r

  std::int64_t total() const { return std::accumulate(steps.begin(), steps.end(), base); }
};

inline TimeSeq time_sequence(const Scheme& s) {
  if (!is_valid_base(s.s0, s.t0))
    throw DomainError("scheme base " + std::to_string(s.s0) + "x" + std::to_string(s.t0) + " is not a base rectangle");
  TimeSeq ts;
  ts.base = base_time(s.s0, s.t0);
  std::int64_t k = s.s0, l = s.t0;
  for (Move m : s.moves) {
    k += delta(m).ds;
    l += delta(m).dt;
    ts.steps.push_back(move_time(m, k, l));
  }
  return ts;
}

inline std::int64_t scheme_time(const Scheme& s) { return time_sequence(s).total(); }

/// T_{i-1} + T_i for moves a then b, with P_i of size k x l.
inline std::int64_t pair_time(Move a, Move b, std::int64_t k, std::int64_t l) {
  Delta da = delta(a), db = delta(b);
  if (k - da.ds - db.ds < 1 || l - da.dt - db.dt < 1) throw DomainError("pair of moves underflows the dimensions");
  const int i = move_id(a), j = move_id(b);
  const std::int64_t mx = std::max(k, l);
  if (j == 1) {
    switch (i) {
      case 1: return 2 * mx - 3;
      case 2: return mx + l - 1;
      case 3: return mx + k - 1;
      case 4:
      case 5: return mx + k + l - 5;
      case 6: return mx + 2 * k - 4;
      case 7: return mx + 2 * l - 4;
    }
  }
  if (i == 1) {
    switch (j) {
      case 2: return l + std::max(k - 2, l);
      case 3: return k + std::max(k, l - 2);
      case 4: return k + l + std::max(k - 2, l - 1) - 3;
      case 5: return k + l + std::max(k - 1, l - 2) - 3;
      case 6: return 2 * k + std::max(k, l - 3) - 2;
      case 7: return 2 * l + std::max(k - 3, l) - 2;
    }
  }
  // rows: previous move 2..7, columns: current move 2..7; value = ck*k + cl*l + c
  static constexpr int table[6][6][3] = {
      {{0, 2, 2}, {1, 1, 0}, {1, 2, -2}, {1, 2, -3}, {2, 1, -3}, {0, 3, 0}},
      {{1, 1, 0}, {2, 0, 2}, {2, 1, -3}, {2, 1, -2}, {3, 0, 0}, {1, 2, -3}},
      {{1, 2, -3}, {2, 1, -3}, {2, 2, -7}, {2, 2, -7}, {3, 1, -6}, {1, 3, -6}},
      {{1, 2, -3}, {2, 1, -3}, {2, 2, -7}, {2, 2, -7}, {3, 1, -6}, {1, 3, -6}},
      {{2, 1, -4}, {3, 0, 0}, {3, 1, -7}, {3, 1, -5}, {4, 0, -2}, {2, 2, -8}},
      {{0, 3, 0}, {1, 2, -4}, {1, 3, -5}, {1, 3, -7}, {2, 2, -8}, {0, 4, -2}},
  };
  const int* e = table[i - 2][j - 2];
  return e[0] * k + e[1] * l + e[2];
}

/// Equal total growth in both dimensions.
inline bool compatible(const std::vector<Move>& a, const std::vector<Move>& b) {
  auto sum = [](const std::vector<Move>& v) {
    int s = 0, t = 0;
    for (Move m : v) {
      s += delta(m).ds;
      t += delta(m).dt;
    }
    return std::pair(s, t);
  };
  return sum(a) == sum(b);
}

namespace detail {

inline bool allowed_start(std::int64_t k, std::int64_t l) {
  return k >= 2 && l >= 2 && !(k == 3 && l == 3);
}

/// Walks maximizing branches (smallest move id first) down to a base; with `strict`,
/// only bases with both sides >= 2 other than 3 x 3 are accepted.
class SchemeSearch {
 public:
  explicit SchemeSearch(MemoTable& memo) : memo_(memo) {}

  std::optional<Scheme> run(std::int64_t k, std::int64_t l, bool strict) {
    strict_ = strict;
    dead_.clear();
    std::vector<Move> rev;
    if (!descend(k, l, rev)) return std::nullopt;
    Scheme s;
    std::tie(s.s0, s.t0) = base_;
    s.moves.assign(rev.rbegin(), rev.rend());
    return s;
  }

 private:
  bool descend(std::int64_t k, std::int64_t l, std::vector<Move>& rev) {
    if (is_base_dims(k, l)) {
      if (strict_ && !rev.empty() && !allowed_start(k, l)) return false;
      base_ = {k, l};
      return true;
    }
    if (dead_.count({k, l})) return false;
    for (const auto& c : memo_.argmax_moves(k, l)) {
      rev.push_back(c.move);
      if (descend(c.k_prev, c.l_prev, rev)) return true;
      rev.pop_back();
    }
    dead_.insert({k, l});
    return false;
  }

  MemoTable& memo_;
  bool strict_ = true;
  std::pair<std::int64_t, std::int64_t> base_{};
  std::set<std::pair<std::int64_t, std::int64_t>> dead_;
};

}  // namespace detail

/// A scheme whose time equals M(k,l). Prefers bases with both sides >= 2 and not 3 x 3.
inline Scheme find_scheme(std::int64_t k, std::int64_t l, MemoTable& memo) {
  if (k < 1 || l < 1) throw DomainError("dimensions must be at least 1");
  memo.max_time(k, l);
  detail::SchemeSearch search(memo);
  if (auto s = search.run(k, l, true)) return *s;
  return *search.run(k, l, false);
}

inline Scheme find_scheme(std::int64_t k, std::int64_t l) {
  MemoTable memo;
  return find_scheme(k, l, memo);
}

// Normal forms for the move sequence. Each requires a base (s0, 2) with s0 >= 3.
inline bool matches_form(const Scheme& s, const std::string& pattern) {
  return std::regex_match(move_string(s.moves), std::regex(pattern));
}

/// Moves only from {1,2,3}, arranged as 2*1*3* or 3*1*2*.
inline bool in_small_move_form(const Scheme& s) { return matches_form(s, "2*1*3*|3*1*2*"); }

inline bool in_sorted_form(const Scheme& s) {
  return s.t0 == 2 && s.s0 >= 3 && matches_form(s, "(1*3*|3*1*2*)[4-7]*");
}

inline bool in_short_prefix_form(const Scheme& s) {
  return s.t0 == 2 && s.s0 >= 3 && matches_form(s, "(1?3{0,2}|3{0,2}1?2*)[4-7]*");
}

// ---------------------------------------------------------------------------
// Realization

enum class VerifyMode { every_move, final_only };

enum Corner : unsigned { kBL = 1, kBR = 2, kTL = 4, kTR = 8 };

struct Realization {
  Scheme scheme;
  Rect box;               // where the seeds were placed
  CellSet<2> seeds;
  TimeSeq times;
  unsigned last_corners;  // Corner bits of the final rectangle attaining the final time
  std::vector<std::int64_t> verified_totals;  // simulated total after each move (every_move only)
};

namespace detail {

inline unsigned corner_bits_from_report(const InfectionReport<2>& rep) {
  if (rep.total_time.is_never()) return 0;
  const int s = rep.topology.dims[0], t = rep.topology.dims[1];
  const std::int64_t T = rep.total_time.value();
  unsigned bits = 0;
  auto at = [&](int x, int y) { return rep.times[rep.topology.index(cell(x, y))] == T; };
  if (at(1, 1)) bits |= kBL;
  if (at(s, 1)) bits |= kBR;
  if (at(1, t)) bits |= kTL;
  if (at(s, t)) bits |= kTR;
  return bits;
}

/// Seeds in a local frame [1..s] x [1..t] plus the corners infected last.
class Frame {
 public:
  Frame(int s, int t, std::vector<Cell> seeds, unsigned corners)
      : s_(s), t_(t), seeds_(std::move(seeds)), corners_(corners) {}

  int s() const { return s_; }
  int t() const { return t_; }
  unsigned corners() const { return corners_; }
  const std::vector<Cell>& seeds() const { return seeds_; }

  void reflect_x() {
    for (auto& c : seeds_) c[0] = s_ + 1 - c[0];
    corners_ = swap_bits(swap_bits(corners_, kBL, kBR), kTL, kTR);
  }
  void reflect_y() {
    for (auto& c : seeds_) c[1] = t_ + 1 - c[1];
    corners_ = swap_bits(swap_bits(corners_, kBL, kTL), kBR, kTR);
  }
  void transpose() {
    for (auto& c : seeds_) std::swap(c[0], c[1]);
    std::swap(s_, t_);
    corners_ = swap_bits(corners_, kBR, kTL);
  }

  /// Reflect so that `want` is a last corner; candidates tried as: none, x, y, both.
  void orient(unsigned want) {
    if (corners_ & want) return;
    auto img_x = swap_bits(swap_bits(corners_, kBL, kBR), kTL, kTR);
    if (img_x & want) return reflect_x();
    auto img_y = swap_bits(swap_bits(corners_, kBL, kTL), kBR, kTR);
    if (img_y & want) return reflect_y();
    auto img_xy = swap_bits(swap_bits(img_x, kBL, kTL), kBR, kTR);
    if (img_xy & want) {
      reflect_x();
      reflect_y();
      return;
    }
    throw ConsistencyError("no last corner available for the next move");
  }

  void apply(Move m) {
    switch (m) {
      case Move::m1: {
        orient(kTR);
        seeds_.push_back(cell(s_ + 1, t_ + 1));
        unsigned c = s_ > t_ ? kTL : t_ > s_ ? kBR : (kTL | kBR);
        ++s_;
        ++t_;
        corners_ = c;
        break;
      }
      case Move::m2:
        orient(kTR);
        seeds_.push_back(cell(s_ + 2, t_));
        s_ += 2;
        corners_ = kBR;
        break;
      case Move::m4:
        orient(kBR);
        seeds_.push_back(cell(s_ + 2, 1));
        seeds_.push_back(cell(s_ + 2, t_ + 1));
        s_ += 2;
        t_ += 1;
        corners_ = kTL;
        break;
      case Move::m6:
        orient(kTR);
        seeds_.push_back(cell(s_, t_ + 2));
        seeds_.push_back(cell(1, t_ + 3));
        t_ += 3;
        corners_ = kTR;
        break;
      case Move::m3:
      case Move::m5:
      case Move::m7:
        transpose();
        apply(m == Move::m3 ? Move::m2 : m == Move::m5 ? Move::m4 : Move::m6);
        transpose();
        break;
    }
  }

  InfectionReport<2> simulate_frame() const { return simulate(CellSet<2>(seeds_), box2(s_, t_)); }

 private:
  static unsigned swap_bits(unsigned v, unsigned a, unsigned b) {
    bool ha = v & a, hb = v & b;
    v &= ~(a | b);
    if (ha) v |= b;
    if (hb) v |= a;
    return v;
  }

  int s_, t_;
  std::vector<Cell> seeds_;
  unsigned corners_;
};

/// Seeds of a k x 2 rectangle taking floor(3(k-1)/2) steps.
inline std::vector<Cell> two_row_base(int k) {
  std::vector<Cell> out;
  if (k % 2 == 0) {
    out = {cell(1, 1), cell(2, 2)};
    for (int j = 2; j <= k / 2; ++j) out.push_back(cell(2 * j, j % 2 == 0 ? 1 : 2));
  } else {
    out = {cell(1, 1), cell(1, 2)};
    for (int j = 1; j <= (k - 1) / 2; ++j) out.push_back(cell(2 * j + 1, j % 2 == 1 ? 1 : 2));
  }
  return out;
}

/// Seeds of a k x 1 rectangle: every other cell, plus the last one when k is even.
inline std::vector<Cell> one_row_base(int k) {
  std::vector<Cell> out;
  for (int x = 1; x <= k; x += 2) out.push_back(cell(x, 1));
  if (k % 2 == 0) out.push_back(cell(k, 1));
  return out;
}

inline const CellSet<2>& three_by_three_witness() {
  static const CellSet<2> w = brute_force_max(3, 3).witnesses.at(0);
  return w;
}

inline Frame base_frame(int s0, int t0) {
  std::vector<Cell> seeds;
  if (t0 == 1) {
    seeds = one_row_base(s0);
  } else if (s0 == 1) {
    for (auto c : one_row_base(t0)) seeds.push_back(cell(1, c.x()));
  } else if (t0 == 2) {
    seeds = two_row_base(s0);
  } else if (s0 == 2) {
    for (auto c : two_row_base(t0)) seeds.push_back(cell(c.y(), c.x()));
  } else if (s0 == 3 && t0 == 3) {
    seeds = three_by_three_witness().cells();
  } else {
    throw DomainError("not a base rectangle");
  }
  Frame f(s0, t0, seeds, 0);
  auto rep = f.simulate_frame();
  if (rep.total_time != StepTime(base_time(s0, t0)))
    throw ConsistencyError("base pattern for " + std::to_string(s0) + "x" + std::to_string(t0) + " is not extremal");
  return Frame(s0, t0, std::move(seeds), corner_bits_from_report(rep));
}

}  // namespace detail

/// Concrete seeds for a scheme, placed with the rectangle's lower-left cell at `anchor`.
inline Realization realize_scheme(const Scheme& scheme, Cell anchor = cell(1, 1),
                                  VerifyMode mode = VerifyMode::every_move) {
  if (!is_valid_base(scheme.s0, scheme.t0)) throw DomainError("scheme base is not a base rectangle");
  auto [k, l] = scheme_dims(scheme);
  if (k > (1 << 20) || l > (1 << 20)) throw DomainError("scheme too large to realize");
  Realization out;
  out.scheme = scheme;
  out.times = time_sequence(scheme);

  detail::Frame f = detail::base_frame(static_cast<int>(scheme.s0), static_cast<int>(scheme.t0));
  std::int64_t expect = out.times.base;
  for (std::size_t i = 0; i < scheme.moves.size(); ++i) {
    f.apply(scheme.moves[i]);
    expect += out.times.steps[i];
    if (mode == VerifyMode::every_move) {
      auto rep = f.simulate_frame();
      if (rep.total_time != StepTime(expect))
        throw ConsistencyError("after move " + std::to_string(i + 1) + " of '" + to_string(scheme) +
                               "': simulated " + rep.total_time.to_string() + ", expected " +
                               std::to_string(expect));
      if (detail::corner_bits_from_report(rep) != f.corners())
        throw ConsistencyError("last-corner bookkeeping diverged after move " + std::to_string(i + 1));
      out.verified_totals.push_back(expect);
    }
  }
  if (mode == VerifyMode::final_only) {
    auto rep = f.simulate_frame();
    if (rep.total_time != StepTime(expect))
      throw ConsistencyError("realization of '" + to_string(scheme) + "' simulated " +
                             rep.total_time.to_string() + ", expected " + std::to_string(expect));
  }
  out.last_corners = f.corners();
  out.box = make_rect(anchor.x(), anchor.y(), f.s(), f.t());
  out.seeds = CellSet<2>(f.seeds()).translated(cell(anchor.x() - 1, anchor.y() - 1));
  return out;
}

inline Realization perfect_realization(std::int64_t k, std::int64_t l, MemoTable& memo,
                                       VerifyMode mode = VerifyMode::every_move) {
  return realize_scheme(find_scheme(k, l, memo), cell(1, 1), mode);
}

/// Seeds spanning [1..k] x [1..l] in exactly M(k,l) steps.
inline CellSet<2> perfect_set(std::int64_t k, std::int64_t l, MemoTable& memo,
                              VerifyMode mode = VerifyMode::every_move) {
  return perfect_realization(k, l, memo, mode).seeds;
}

inline CellSet<2> perfect_set(std::int64_t k, std::int64_t l) {
  MemoTable memo;
  return perfect_set(k, l, memo);
}

}  // namespace percmax
