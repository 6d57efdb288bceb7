#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "percmax/errors.hpp"
#include "percmax/moves.hpp"

namespace percmax {

/// True for the dimensions where the maximum time is given directly rather than by the seven-way recursion.
inline bool is_base_dims(std::int64_t k, std::int64_t l) {
  return k <= 2 || l <= 2 || (k == 3 && l == 3);
}

/// Maximum time for base dimensions.
inline std::int64_t base_time(std::int64_t k, std::int64_t l) {
  if (k < 1 || l < 1) throw DomainError("dimensions must be positive");
  if (!is_base_dims(k, l)) throw DomainError("not a base rectangle");
  if (k > l) std::swap(k, l);
  if (k == 1) return l <= 2 ? 0 : 1;
  if (k == 2) return 3 * (l - 1) / 2;
  return 4;
}

struct MoveChoice {
  Move move;
  std::int64_t k_prev;
  std::int64_t l_prev;
  std::int64_t increment;
};

/// Symmetric table of maximum percolation times, filled without recursion.
/// Row a holds M(a,b) for b = a, a+1, ... contiguously.
class MemoTable {
 public:
  std::int64_t max_time(std::int64_t k, std::int64_t l) {
    check_dims(k, l);
    auto [a, b] = canonical(k, l);
    extend_row(a, b);
    return rows_[a - 1][b - a];
  }

  /// Read-only access; the entry must already be present.
  std::int64_t lookup(std::int64_t k, std::int64_t l) const {
    check_dims(k, l);
    auto v = find(k, l);
    if (!v) throw DomainError("M(" + std::to_string(k) + "," + std::to_string(l) + ") not in table");
    return *v;
  }

  bool contains(std::int64_t k, std::int64_t l) const { return k >= 1 && l >= 1 && find(k, l).has_value(); }

  /// All entries with 1 <= k <= l <= limit.
  void build_square(std::int64_t limit) {
    if (limit >= 1) extend_row(limit, limit);
  }

  /// All entries with k + l <= limit.
  void extend_sum(std::int64_t limit) {
    for (std::int64_t a = 1; 2 * a <= limit; ++a) extend_one_row(a, limit - a);
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  /// Every branch of the recursion that attains the maximum, in move order.
  std::vector<MoveChoice> argmax_moves(std::int64_t k, std::int64_t l) {
    check_dims(k, l);
    if (is_base_dims(k, l)) throw DomainError("no moves into a base rectangle");
    std::int64_t best = max_time(k, l);
    std::vector<MoveChoice> out;
    for (Move m : kAllMoves) {
      if (!move_applies(m, k, l)) continue;
      Delta d = delta(m);
      std::int64_t kp = k - d.ds, lp = l - d.dt;
      std::int64_t inc = move_time(m, k, l);
      if (max_time(kp, lp) + inc == best) out.push_back({m, kp, lp, inc});
    }
    if (out.empty()) throw ConsistencyError("no maximizing branch");
    return out;
  }

  /// M(s+1,t) >= M(s,t)+1 for s >= 1, t >= 2, s+t <= limit (and the transposed statement).
  bool monotonicity_check(std::int64_t limit) {
    extend_sum(limit + 1);
    for (std::int64_t s = 1; s + 2 <= limit; ++s)
      for (std::int64_t t = 2; s + t <= limit; ++t) {
        if (lookup(s + 1, t) < lookup(s, t) + 1) return false;
        if (lookup(t, s + 1) < lookup(t, s) + 1) return false;
      }
    return true;
  }

  /// Recompute every stored entry from its stored predecessors.
  void validate() const {
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < rows_[i].size(); ++j) {
        std::int64_t a = static_cast<std::int64_t>(i) + 1, b = a + static_cast<std::int64_t>(j);
        auto expect = evaluate(a, b, [&](std::int64_t x, std::int64_t y) { return find(x, y); });
        if (!expect || *expect != rows_[i][j])
          throw ConsistencyError("entry M(" + std::to_string(a) + "," + std::to_string(b) +
                                 ") does not satisfy the recursion");
      }
  }

  /// Canonical entries (k <= l) sorted by (k+l, k).
  std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, std::int64_t>> entries() const {
    std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, std::int64_t>> out;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < rows_[i].size(); ++j) {
        std::int64_t a = static_cast<std::int64_t>(i) + 1;
        out.push_back({{a, a + static_cast<std::int64_t>(j)}, rows_[i][j]});
      }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      auto [a1, b1] = x.first;
      auto [a2, b2] = y.first;
      return std::pair(a1 + b1, a1) < std::pair(a2 + b2, a2);
    });
    return out;
  }

  void save(std::ostream& os) const {
    os << "k,ell,M\n";
    for (const auto& [key, v] : entries()) os << key.first << ',' << key.second << ',' << v << '\n';
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DomainError("cannot open " + path + " for writing");
    save(os);
    if (!os) throw DomainError("write failed: " + path);
  }

  static MemoTable load(std::istream& is) {
    MemoTable t;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) throw ParseError(1, "missing header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') throw ParseError(lineno, "CRLF line endings");
    if (line != "k,ell,M") throw ParseError(lineno, "expected header 'k,ell,M'");

    struct Row {
      std::int64_t k, l, m;
      std::size_t line;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') throw ParseError(lineno, "CRLF line endings");
      if (line.empty()) throw ParseError(lineno, "empty line");
      Row r{0, 0, 0, lineno};
      char c1 = 0, c2 = 0;
      std::istringstream ss(line);
      if (!(ss >> r.k >> c1 >> r.l >> c2 >> r.m) || c1 != ',' || c2 != ',' || !(ss >> std::ws).eof())
        throw ParseError(lineno, "expected 'k,ell,M'");
      if (r.k < 1 || r.l < r.k) throw ParseError(lineno, "need 1 <= k <= ell");
      if (r.m < 0) throw ParseError(lineno, "negative value");
      if (!rows.empty()) {
        const Row& p = rows.back();
        if (std::pair(p.k + p.l, p.k) >= std::pair(r.k + r.l, r.k))
          throw ParseError(lineno, "rows not sorted by (k+ell, k)");
      }
      rows.push_back(r);
    }

    std::vector<Row> by_row = rows;
    std::stable_sort(by_row.begin(), by_row.end(),
                     [](const Row& x, const Row& y) { return std::pair(x.k, x.l) < std::pair(y.k, y.l); });
    for (const Row& r : by_row) {
      while (static_cast<std::int64_t>(t.rows_.size()) < r.k) t.rows_.emplace_back();
      auto& row = t.rows_[r.k - 1];
      if (static_cast<std::int64_t>(row.size()) != r.l - r.k)
        throw ParseError(r.line, "entry leaves a gap in row k=" + std::to_string(r.k));
      row.push_back(r.m);
    }
    for (const Row& r : rows) {
      auto expect = t.evaluate(r.k, r.l, [&](std::int64_t x, std::int64_t y) { return t.find(x, y); });
      if (!expect) throw ParseError(r.line, "predecessor entries missing");
      if (*expect != r.m)
        throw ParseError(r.line, "value " + std::to_string(r.m) + " violates the recursion (expected " +
                                     std::to_string(*expect) + ")");
    }
    return t;
  }

  static MemoTable load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("cannot open " + path);
    return load(is);
  }

  friend bool operator==(const MemoTable& a, const MemoTable& b) { return a.entries() == b.entries(); }

 private:
  static void check_dims(std::int64_t k, std::int64_t l) {
    if (k < 1 || l < 1) throw DomainError("dimensions must be at least 1");
  }

  static std::pair<std::int64_t, std::int64_t> canonical(std::int64_t k, std::int64_t l) {
    return k <= l ? std::pair(k, l) : std::pair(l, k);
  }

  std::optional<std::int64_t> find(std::int64_t k, std::int64_t l) const {
    auto [a, b] = canonical(k, l);
    if (a > static_cast<std::int64_t>(rows_.size())) return std::nullopt;
    const auto& row = rows_[a - 1];
    if (b - a >= static_cast<std::int64_t>(row.size())) return std::nullopt;
    return row[b - a];
  }

  /// Value at (k,l) given a way to read predecessors; nullopt if one is missing.
  template <class Get>
  static std::optional<std::int64_t> evaluate(std::int64_t k, std::int64_t l, Get&& get) {
    if (is_base_dims(k, l)) return base_time(k, l);
    std::optional<std::int64_t> best;
    for (Move m : kAllMoves) {
      if (!move_applies(m, k, l)) continue;
      Delta d = delta(m);
      std::int64_t kp = k - d.ds, lp = l - d.dt;
      auto prev = get(kp, lp);
      if (!prev) return std::nullopt;
      std::int64_t v = *prev + move_time(m, k, l);
      if (!best || v > *best) best = v;
    }
    return best;
  }

  // Ensures rows 1..a each reach column b.
  void extend_row(std::int64_t a, std::int64_t b) {
    for (std::int64_t r = 1; r <= a; ++r) extend_one_row(r, b);
  }

  // Predecessors of (a,b) with a <= b lie in rows < a up to column b, or earlier in row a.
  void extend_one_row(std::int64_t a, std::int64_t b) {
    if (b < a) return;
    while (static_cast<std::int64_t>(rows_.size()) < a) rows_.emplace_back();
    auto& row = rows_[a - 1];
    row.reserve(static_cast<std::size_t>(b - a + 1));
    for (std::int64_t col = a + static_cast<std::int64_t>(row.size()); col <= b; ++col) {
      auto v = evaluate(a, col, [&](std::int64_t x, std::int64_t y) { return find(x, y); });
      if (!v) {
        // Lower rows are short; fill them first.
        for (std::int64_t r = 1; r < a; ++r) extend_one_row(r, b);
        v = evaluate(a, col, [&](std::int64_t x, std::int64_t y) { return find(x, y); });
        if (!v) throw ConsistencyError("recursion dependency missing");
      }
      rows_[a - 1].push_back(*v);
    }
  }

  std::vector<std::vector<std::int64_t>> rows_;
};

}  // namespace percmax
