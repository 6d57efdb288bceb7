#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "percmax/errors.hpp"

namespace percmax {

enum class Move : int { m1 = 1, m2, m3, m4, m5, m6, m7 };

inline constexpr std::array<Move, 7> kAllMoves{Move::m1, Move::m2, Move::m3, Move::m4,
                                               Move::m5, Move::m6, Move::m7};

struct Delta {
  int ds;
  int dt;
};

constexpr int move_id(Move m) { return static_cast<int>(m); }

inline Move move_from_id(int id) {
  if (id < 1 || id > 7) throw DomainError("move id must be in 1..7, got " + std::to_string(id));
  return static_cast<Move>(id);
}

constexpr Delta delta(Move m) {
  switch (m) {
    case Move::m1: return {1, 1};
    case Move::m2: return {2, 0};
    case Move::m3: return {0, 2};
    case Move::m4: return {2, 1};
    case Move::m5: return {1, 2};
    case Move::m6: return {0, 3};
    case Move::m7: return {3, 0};
  }
  return {0, 0};
}

/// Whether move m can grow a rectangle into k x l while keeping its time.
/// Moves 4 and 5 need the side grown by one to be at least 3 beforehand: with a side of 2 their two seeds
/// share a neighbour and interact at once.
inline bool move_applies(Move m, std::int64_t k, std::int64_t l) {
  Delta d = delta(m);
  std::int64_t kp = k - d.ds, lp = l - d.dt;
  if (kp < 1 || lp < 1) return false;
  if (m == Move::m4 && lp == 2) return false;
  if (m == Move::m5 && kp == 2) return false;
  return true;
}

/// Time added by move m when the grown rectangle is k x l.
inline std::int64_t move_time(Move m, std::int64_t k, std::int64_t l) {
  Delta d = delta(m);
  if (k - d.ds < 1 || l - d.dt < 1)
    throw DomainError("move " + std::to_string(move_id(m)) + " has no predecessor at " +
                      std::to_string(k) + "x" + std::to_string(l));
  switch (m) {
    case Move::m1: return std::max(k, l) - 1;
    case Move::m2: return l + 1;
    case Move::m3: return k + 1;
    case Move::m4:
    case Move::m5: return k + l - 2;
    case Move::m6: return 2 * k - 1;
    case Move::m7: return 2 * l - 1;
  }
  return 0;
}

}  // namespace percmax
