#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "percmax/engine.hpp"
#include "percmax/errors.hpp"

namespace percmax {

/// Bit i of a pattern is the cell (i % k + 1, i / k + 1).
inline CellSet<2> pattern_cells(std::uint64_t pattern, int k) {
  std::vector<Cell> out;
  while (pattern) {
    int i = std::countr_zero(pattern);
    pattern &= pattern - 1;
    out.push_back(cell(i % k + 1, i / k + 1));
  }
  return CellSet<2>(std::move(out));
}

inline std::uint64_t cells_pattern(const CellSet<2>& s, int k) {
  std::uint64_t p = 0;
  for (const auto& c : s) p |= std::uint64_t{1} << ((c.y() - 1) * k + (c.x() - 1));
  return p;
}

struct OracleResult {
  int k = 0;
  int l = 0;
  std::int64_t max_time = -1;  // -1: no percolating set in the search space
  std::vector<CellSet<2>> witnesses;
  std::uint64_t enumerated = 0;
};

struct OracleOptions {
  int cap = 25;
  unsigned jobs = 1;
  bool force = false;
  std::size_t witness_cap = 1;
};

namespace detail {

/// Percolation time of a bit pattern on a k x l box (k*l <= 64), or -1.
class BitboardSim {
 public:
  BitboardSim(int k, int l) : k_(k), n_(k * l) {
    full_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    std::uint64_t col1 = 0;
    for (int y = 0; y < l; ++y) col1 |= std::uint64_t{1} << (y * k);
    not_first_col_ = full_ & ~col1;
    not_last_col_ = full_ & ~(col1 << (k - 1));
  }

  std::uint64_t full() const { return full_; }

  std::uint64_t step(std::uint64_t a) const {
    std::uint64_t w = (a << 1) & not_first_col_;  // from the left neighbour
    std::uint64_t e = (a >> 1) & not_last_col_;
    std::uint64_t s = (a << k_) & full_;
    std::uint64_t n = a >> k_;
    std::uint64_t two = (w & e) | (w & s) | (w & n) | (e & s) | (e & n) | (s & n);
    return a | two;
  }

  /// Time, or -1 if the pattern does not percolate.
  int time(std::uint64_t a) const {
    int t = 0;
    while (a != full_) {
      std::uint64_t b = step(a);
      if (b == a) return -1;
      a = b;
      ++t;
    }
    return t;
  }

  /// Per-cell infection times, -1 for never.
  std::vector<int> cell_times(std::uint64_t a) const {
    std::vector<int> out(static_cast<std::size_t>(n_), -1);
    for (int t = 0;; ++t) {
      std::uint64_t fresh = a;
      for (int i = 0; i < n_; ++i)
        if (((fresh >> i) & 1u) && out[i] < 0) out[i] = t;
      std::uint64_t b = step(a);
      if (b == a) break;
      a = b;
    }
    return out;
  }

 private:
  int k_;
  int n_;
  std::uint64_t full_ = 0;
  std::uint64_t not_first_col_ = 0;
  std::uint64_t not_last_col_ = 0;
};

struct Partial {
  std::int64_t best = -1;
  std::vector<std::uint64_t> witnesses;  // ascending
  std::uint64_t enumerated = 0;
};

inline void absorb(Partial& acc, std::int64_t t, std::uint64_t p, std::size_t cap) {
  if (t > acc.best) {
    acc.best = t;
    acc.witnesses.assign(1, p);
  } else if (t == acc.best && acc.witnesses.size() < cap) {
    acc.witnesses.push_back(p);
  }
}

inline Partial merge(std::vector<Partial> parts, std::size_t cap) {
  Partial out;
  for (auto& p : parts) {
    out.enumerated += p.enumerated;
    if (p.best > out.best) {
      out.best = p.best;
      out.witnesses.clear();
    }
    if (p.best == out.best && p.best >= 0)
      for (auto w : p.witnesses) out.witnesses.push_back(w);
  }
  std::sort(out.witnesses.begin(), out.witnesses.end());
  if (out.witnesses.size() > cap) out.witnesses.resize(cap);
  return out;
}

template <class Body>
Partial run_ranges(std::uint64_t total, unsigned jobs, std::size_t cap, Body body) {
  jobs = std::max(1u, jobs);
  if (total < jobs) jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, total));
  std::vector<Partial> parts(jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) {
    std::uint64_t lo = total / jobs * j + std::min<std::uint64_t>(j, total % jobs);
    std::uint64_t hi = lo + total / jobs + (j < total % jobs ? 1 : 0);
    if (jobs == 1) {
      body(lo, hi, parts[j]);
    } else {
      pool.emplace_back([&, lo, hi, j] { body(lo, hi, parts[j]); });
    }
  }
  for (auto& t : pool) t.join();
  return merge(std::move(parts), cap);
}

inline OracleResult finish(int k, int l, const Partial& p) {
  OracleResult r;
  r.k = k;
  r.l = l;
  r.max_time = p.best;
  r.enumerated = p.enumerated;
  for (auto w : p.witnesses) r.witnesses.push_back(pattern_cells(w, k));
  return r;
}

inline void check_cap(int k, int l, const OracleOptions& opt) {
  if (k < 1 || l < 1) throw DomainError("dimensions must be positive");
  if (k * l > 64) throw DomainError("oracle supports at most 64 cells");
  if (k * l > opt.cap && !opt.force)
    throw DomainError("k*l = " + std::to_string(k * l) + " exceeds the oracle cap of " +
                      std::to_string(opt.cap) + " (use the force override)");
}

/// Binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t choose(int n, int m) {
  if (m < 0 || m > n) return 0;
  m = std::min(m, n - m);
  unsigned __int128 c = 1;
  for (int i = 1; i <= m; ++i) {
    c = c * static_cast<unsigned>(n - m + i) / static_cast<unsigned>(i);
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

/// The r-th (0-based, ascending) m-subset of n bits.
inline std::uint64_t unrank_combination(std::uint64_t r, int n, int m) {
  std::uint64_t p = 0;
  for (int bit = n - 1; bit >= 0 && m > 0; --bit) {
    // patterns with this bit clear come first
    std::uint64_t without = choose(bit, m);
    if (r >= without) {
      r -= without;
      p |= std::uint64_t{1} << bit;
      --m;
    }
  }
  return p;
}

inline std::uint64_t next_combination(std::uint64_t v) {
  std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace detail

/// Maximum percolation time over all subsets of the k x l box.
inline OracleResult brute_force_max(int k, int l, const OracleOptions& opt = {}) {
  detail::check_cap(k, l, opt);
  const int n = k * l;
  if (n > 40) throw DomainError("exhaustive search over more than 2^40 subsets refused");
  detail::BitboardSim sim(k, l);
  const int min_size = (k + l + 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << n;
  auto p = detail::run_ranges(total, opt.jobs, opt.witness_cap,
                              [&](std::uint64_t lo, std::uint64_t hi, detail::Partial& acc) {
                                for (std::uint64_t a = lo; a < hi; ++a) {
                                  ++acc.enumerated;
                                  if (std::popcount(a) < min_size) continue;
                                  int t = sim.time(a);
                                  if (t >= 0) detail::absorb(acc, t, a, opt.witness_cap);
                                }
                              });
  return detail::finish(k, l, p);
}

/// Maximum percolation time over subsets of size exactly m.
inline OracleResult brute_force_max_fixed_size(int k, int l, int m, const OracleOptions& opt = {}) {
  if (k < 1 || l < 1 || k * l > 64) throw DomainError("unsupported dimensions");
  const int n = k * l;
  if (m < 0 || m > n) throw DomainError("subset size out of range");
  const std::uint64_t total = detail::choose(n, m);
  if (total > 100'000'000ull) throw DomainError("C(" + std::to_string(n) + "," + std::to_string(m) +
                                                ") exceeds the enumeration guard of 1e8");
  detail::BitboardSim sim(k, l);
  auto p = detail::run_ranges(total, opt.jobs, opt.witness_cap,
                              [&](std::uint64_t lo, std::uint64_t hi, detail::Partial& acc) {
                                if (lo >= hi) return;
                                std::uint64_t a = detail::unrank_combination(lo, n, m);
                                for (std::uint64_t r = lo; r < hi; ++r) {
                                  ++acc.enumerated;
                                  int t = sim.time(a);
                                  if (t >= 0) detail::absorb(acc, t, a, opt.witness_cap);
                                  if (m > 0 && r + 1 < hi) a = detail::next_combination(a);
                                }
                              });
  OracleResult r = detail::finish(k, l, p);
  return r;
}

/// Every percolating subset has at least ceil((k+l)/2) cells. Exhaustive, no pruning.
inline bool verify_fact_min_size(int k, int l) {
  if (k < 1 || l < 1 || k * l > 16) throw DomainError("verify_fact_min_size needs k*l <= 16");
  detail::BitboardSim sim(k, l);
  const int need = (k + l + 1) / 2;
  const std::uint64_t total = std::uint64_t{1} << (k * l);
  for (std::uint64_t a = 0; a < total; ++a)
    if (sim.time(a) >= 0 && std::popcount(a) < need) return false;
  return true;
}

/// For every percolating set, each non-corner cell is infected by time M-1, M the oracle maximum.
inline bool verify_corner_claim(int k, int l) {
  if (k < 2 || l < 2 || k * l > 16) throw DomainError("verify_corner_claim needs k,l >= 2 and k*l <= 16");
  detail::BitboardSim sim(k, l);
  const int n = k * l;
  const std::uint64_t total = std::uint64_t{1} << n;
  int best = -1;
  for (std::uint64_t a = 0; a < total; ++a) best = std::max(best, sim.time(a));
  std::uint64_t corners = 1 | (std::uint64_t{1} << (k - 1)) | (std::uint64_t{1} << ((l - 1) * k)) |
                          (std::uint64_t{1} << (n - 1));
  for (std::uint64_t a = 0; a < total; ++a) {
    if (sim.time(a) < 0) continue;
    auto times = sim.cell_times(a);
    for (int i = 0; i < n; ++i)
      if (!((corners >> i) & 1u) && times[i] > best - 1) return false;
  }
  return true;
}

}  // namespace percmax
