#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "percmax/geometry.hpp"

namespace percmax {

/// Per-cell infection times of one run of the process.
template <std::size_t D>
struct InfectionReport {
  Topology<D> topology;
  CellSet<D> initial;
  std::vector<std::int32_t> times;  // row-major, -1 = never infected
  StepTime total_time = StepTime::never();
  bool percolated = false;
  std::vector<std::size_t> step_counts;  // step_counts[t-1] = cells newly infected at step t

  StepTime time(const Point<D>& p) const {
    if (!topology.contains(p)) throw DomainError("cell out of bounds");
    std::int32_t t = times[topology.index(p)];
    return t < 0 ? StepTime::never() : StepTime(t);
  }

  std::size_t infected_count() const {
    std::size_t n = initial.size();
    for (auto c : step_counts) n += c;
    return n;
  }

  std::int64_t last_step() const { return static_cast<std::int64_t>(step_counts.size()); }

  /// Cells infected at exactly step t.
  std::vector<Point<D>> frontier(std::int32_t t) const {
    std::vector<Point<D>> out;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) out.push_back(topology.point(i));
    return out;
  }

  CellSet<D> infected() const {
    std::vector<Point<D>> out;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= 0) out.push_back(topology.point(i));
    return CellSet<D>(std::move(out));
  }
};

/// Grid state with each line along coordinate 0 packed into 64-bit words.
template <std::size_t D>
class BitGrid {
 public:
  explicit BitGrid(const Topology<D>& topo) : topo_(topo) {
    topo_.validate();
    width_ = topo_.dims[0];
    words_ = (static_cast<std::size_t>(width_) + 63) / 64;
    lines_ = topo_.cell_count() / static_cast<std::size_t>(width_);
    bits_.assign(words_ * lines_, 0);
    tail_ = (width_ % 64) ? ((std::uint64_t{1} << (width_ % 64)) - 1) : ~std::uint64_t{0};
  }

  BitGrid(const Topology<D>& topo, const CellSet<D>& cells) : BitGrid(topo) {
    topo_.require_contains(cells);
    for (const auto& p : cells) set(p);
  }

  const Topology<D>& topology() const { return topo_; }

  void set(const Point<D>& p) {
    std::size_t i = static_cast<std::size_t>(p[0] - 1);
    bits_[line_of(p) * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
  }

  bool test(const Point<D>& p) const {
    std::size_t i = static_cast<std::size_t>(p[0] - 1);
    return (bits_[line_of(p) * words_ + i / 64] >> (i % 64)) & 1u;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  CellSet<D> cells() const {
    std::vector<Point<D>> out;
    for (std::size_t line = 0; line < lines_; ++line)
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t word = bits_[line * words_ + w];
        while (word) {
          int b = std::countr_zero(word);
          word &= word - 1;
          std::size_t idx = line * static_cast<std::size_t>(width_) + w * 64 + static_cast<std::size_t>(b);
          out.push_back(topo_.point(idx));
        }
      }
    return CellSet<D>(std::move(out));
  }

  friend bool operator==(const BitGrid& a, const BitGrid& b) { return a.bits_ == b.bits_; }

  /// One synchronous round. Returns true if any cell became infected.
  bool advance() {
    const int r = topo_.threshold;
    const bool wrap = topo_.kind == TopologyKind::torus;
    std::vector<std::uint64_t> next(bits_.size());
    std::vector<std::uint64_t> ge(static_cast<std::size_t>(r + 1) * words_);
    std::vector<std::uint64_t> m(words_);
    bool changed = false;

    auto feed = [&](const std::uint64_t* src) {
      for (int j = r; j >= 1; --j)
        for (std::size_t w = 0; w < words_; ++w)
          ge[j * words_ + w] |= ge[(j - 1) * words_ + w] & src[w];
    };

    for (std::size_t line = 0; line < lines_; ++line) {
      std::fill(ge.begin(), ge.end(), 0);
      std::fill(ge.begin(), ge.begin() + static_cast<std::ptrdiff_t>(words_), ~std::uint64_t{0});
      const std::uint64_t* cur = &bits_[line * words_];

      // neighbours along coordinate 0
      if (!(wrap && width_ == 1)) {
        shift_up(cur, m.data());  // m[x] = cur[x-1]
        if (wrap) set_bit(m.data(), 0, get_bit(cur, width_ - 1));
        feed(m.data());
        if (!(wrap && width_ == 2)) {
          shift_down(cur, m.data());  // m[x] = cur[x+1]
          if (wrap) set_bit(m.data(), width_ - 1, get_bit(cur, 0));
          feed(m.data());
        }
      }

      // neighbours along the other coordinates
      std::size_t stride = 1;
      std::size_t rem = line;
      for (std::size_t d = 1; d < D; ++d) {
        const std::size_t n = static_cast<std::size_t>(topo_.dims[d]);
        const std::size_t coord = rem % n;
        rem /= n;
        const bool skip_self = wrap && n == 1;
        if (!skip_self) {
          if (coord > 0) feed(&bits_[(line - stride) * words_]);
          else if (wrap) feed(&bits_[(line + (n - 1) * stride) * words_]);
          if (!(wrap && n == 2)) {
            if (coord + 1 < n) feed(&bits_[(line + stride) * words_]);
            else if (wrap) feed(&bits_[(line - (n - 1) * stride) * words_]);
          }
        }
        stride *= n;
      }

      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t v = cur[w] | ge[static_cast<std::size_t>(r) * words_ + w];
        if (w + 1 == words_) v &= tail_;
        next[line * words_ + w] = v;
        changed |= v != cur[w];
      }
    }
    bits_.swap(next);
    return changed;
  }

 private:
  std::size_t line_of(const Point<D>& p) const {
    std::size_t line = 0;
    for (std::size_t d = D; d-- > 1;)
      line = line * static_cast<std::size_t>(topo_.dims[d]) + static_cast<std::size_t>(p[d] - 1);
    return line;
  }

  void shift_up(const std::uint64_t* src, std::uint64_t* dst) const {
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      dst[w] = (src[w] << 1) | carry;
      carry = src[w] >> 63;
    }
    dst[words_ - 1] &= tail_;
  }

  void shift_down(const std::uint64_t* src, std::uint64_t* dst) const {
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t hi = (w + 1 < words_) ? src[w + 1] << 63 : 0;
      dst[w] = (src[w] >> 1) | hi;
    }
  }

  static bool get_bit(const std::uint64_t* a, int i) { return (a[i / 64] >> (i % 64)) & 1u; }
  static void set_bit(std::uint64_t* a, int i, bool v) {
    if (v) a[i / 64] |= std::uint64_t{1} << (i % 64);
    else a[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }

  Topology<D> topo_;
  int width_ = 0;
  std::size_t words_ = 0;
  std::size_t lines_ = 0;
  std::uint64_t tail_ = 0;
  std::vector<std::uint64_t> bits_;
};

template <std::size_t D>
CellSet<D> step(const CellSet<D>& state, const Topology<D>& topo) {
  BitGrid<D> g(topo, state);
  g.advance();
  return g.cells();
}

namespace detail {

/// Distinct neighbour indices of the site with row-major index idx.
template <std::size_t D>
class NeighbourMap {
 public:
  explicit NeighbourMap(const Topology<D>& t) : topo_(t), wrap_(t.kind == TopologyKind::torus) {
    std::size_t s = 1;
    for (std::size_t d = 0; d < D; ++d) {
      stride_[d] = s;
      s *= static_cast<std::size_t>(t.dims[d]);
    }
  }

  template <class F>
  void for_each(std::size_t idx, F&& f) const {
    std::size_t rem = idx;
    for (std::size_t d = 0; d < D; ++d) {
      const std::size_t n = static_cast<std::size_t>(topo_.dims[d]);
      const std::size_t c = rem % n;
      rem /= n;
      const std::size_t st = stride_[d];
      if (wrap_) {
        if (n == 1) continue;
        f(c > 0 ? idx - st : idx + (n - 1) * st);
        if (n > 2) f(c + 1 < n ? idx + st : idx - (n - 1) * st);
      } else {
        if (c > 0) f(idx - st);
        if (c + 1 < n) f(idx + st);
      }
    }
  }

 private:
  Topology<D> topo_;
  bool wrap_;
  std::array<std::size_t, D> stride_{};
};

}  // namespace detail

/// Event-driven simulation: each round only touches neighbours of the previous frontier.
template <std::size_t D>
InfectionReport<D> simulate(const CellSet<D>& initial, const Topology<D>& topo) {
  topo.validate();
  topo.require_contains(initial);
  InfectionReport<D> rep;
  rep.topology = topo;
  rep.initial = initial;
  const std::size_t total = topo.cell_count();
  rep.times.assign(total, -1);
  std::vector<std::uint8_t> cnt(total, 0);
  const int r = topo.threshold;
  detail::NeighbourMap<D> nb(topo);

  std::vector<std::size_t> frontier, next;
  frontier.reserve(initial.size());
  for (const auto& p : initial) {
    std::size_t i = topo.index(p);
    rep.times[i] = 0;
    frontier.push_back(i);
  }
  std::size_t infected = frontier.size();
  std::int32_t t = 0;
  while (!frontier.empty()) {
    ++t;
    next.clear();
    for (std::size_t v : frontier) {
      nb.for_each(v, [&](std::size_t u) {
        if (rep.times[u] >= 0) return;
        if (++cnt[u] == r) {
          rep.times[u] = t;
          next.push_back(u);
        }
      });
    }
    if (next.empty()) break;
    rep.step_counts.push_back(next.size());
    infected += next.size();
    frontier.swap(next);
  }
  rep.percolated = infected == total;
  rep.total_time = rep.percolated ? StepTime(static_cast<std::int64_t>(rep.step_counts.size()))
                                  : StepTime::never();
  return rep;
}

/// Same report, computed by iterating the word-parallel step to a fixed point.
template <std::size_t D>
InfectionReport<D> simulate_by_steps(const CellSet<D>& initial, const Topology<D>& topo) {
  InfectionReport<D> rep;
  rep.topology = topo;
  rep.initial = initial;
  BitGrid<D> g(topo, initial);
  rep.times.assign(topo.cell_count(), -1);
  for (const auto& p : initial) rep.times[topo.index(p)] = 0;
  std::size_t infected = initial.size();
  for (std::int32_t t = 1;; ++t) {
    BitGrid<D> prev = g;
    if (!g.advance()) break;
    std::size_t added = 0;
    for (const auto& p : g.cells())
      if (!prev.test(p)) {
        rep.times[topo.index(p)] = t;
        ++added;
      }
    rep.step_counts.push_back(added);
    infected += added;
  }
  rep.percolated = infected == topo.cell_count();
  rep.total_time = rep.percolated ? StepTime(static_cast<std::int64_t>(rep.step_counts.size()))
                                  : StepTime::never();
  return rep;
}

template <std::size_t D>
CellSet<D> closure(const CellSet<D>& a, const Topology<D>& topo) {
  return simulate(a, topo).infected();
}

inline Topology<2> box2(int k, int l) { return Topology<2>::box({k, l}); }

}  // namespace percmax
