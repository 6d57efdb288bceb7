#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <boost/rational.hpp>

#include "percmax/engine.hpp"
#include "percmax/rectangles.hpp"
#include "percmax/recurrence.hpp"
#include "percmax/schemes.hpp"

namespace percmax {

using Rational = boost::rational<std::int64_t>;

inline Rational rat(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

/// Always "p/q", including integers ("7/1").
inline std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

struct FractionalMove {
  int kind;    // 4, 5, 6 or 7
  Rational x;  // multiplicity
};

inline void check_fractional(const FractionalMove& f) {
  if (f.kind < 4 || f.kind > 7) throw DomainError("fractional moves exist for kinds 4..7 only");
  if (f.x <= 0) throw DomainError("fractional move multiplicity must be positive");
}

/// Dimensions after applying f to an s x t rectangle.
inline std::pair<Rational, Rational> fractional_dims(const FractionalMove& f, Rational s, Rational t) {
  check_fractional(f);
  switch (f.kind) {
    case 4: return {s + 2 * f.x, t + f.x};
    case 5: return {s + f.x, t + 2 * f.x};
    case 6: return {s, t + 3 * f.x};
    default: return {s + 3 * f.x, t};
  }
}

/// Time of f applied to an s x t rectangle.
inline Rational fractional_time(const FractionalMove& f, Rational s, Rational t) {
  check_fractional(f);
  if (s < 1 || t < 1) throw DomainError("rectangle sides must be at least 1");
  const Rational& x = f.x;
  switch (f.kind) {
    case 4:
    case 5: return x * (s + t + 1) + Rational(3, 2) * (x * x - x);
    case 6: return x * (2 * s - 1);
    default: return x * (2 * t - 1);
  }
}

/// Time of (a,1/2) followed by (b,1/2) ending at a k x l rectangle, from the tabulated values.
inline Rational half_move_pair_time(int a, int b, Rational k, Rational l) {
  auto ok = [](int m) { return m == 4 || m == 6 || m == 7; };
  if (!ok(a) || !ok(b)) throw DomainError("half-move pairs use kinds 4, 6 and 7");
  if (a == 4 && b == 4) return k + l - 2;
  if (a == 4 && b == 6) return (3 * k + l) / 2 - Rational(15, 8);
  if (a == 4 && b == 7) return (k + 3 * l) / 2 - Rational(15, 8);
  if (a == 6 && b == 4) return (3 * k + l) / 2 - Rational(17, 8);
  if (a == 6 && b == 6) return 2 * k - 1;
  if (a == 6 && b == 7) return k + l - Rational(5, 2);
  if (a == 7 && b == 4) return (k + 3 * l) / 2 - Rational(13, 8);
  if (a == 7 && b == 6) return k + l - Rational(5, 2);
  return 2 * l - 1;
}

// ---------------------------------------------------------------------------
// Square lower bound construction

struct PhasePlan {
  int n = 0;
  int s = 0;
  std::array<std::int64_t, 4> phase_times{};  // base, single Move 1, the Move 4s, the Move 6s

  int move4_count() const { return (n - s - 1) / 2; }
  int move6_count() const { return (n + s - 5) / 6; }
  std::int64_t total() const { return phase_times[0] + phase_times[1] + phase_times[2] + phase_times[3]; }

  Scheme scheme() const {
    Scheme q{s, 2, {Move::m1}};
    q.moves.insert(q.moves.end(), static_cast<std::size_t>(move4_count()), Move::m4);
    q.moves.insert(q.moves.end(), static_cast<std::size_t>(move6_count()), Move::m6);
    return q;
  }
};

/// The integer s in (n/3-3, n/3+3] with 6 | n+s-5.
inline int slow_width(int n) {
  if (n < 6) throw DomainError("slow construction needs n >= 6");
  for (int s = 1; s <= n; ++s) {
    // s > n/3 - 3  <=>  3s > n - 9 ;  s <= n/3 + 3  <=>  3s <= n + 9
    if (3 * s > n - 9 && 3 * s <= n + 9 && (n + s - 5) % 6 == 0) return s;
  }
  throw ConsistencyError("no admissible width for n = " + std::to_string(n));
}

inline PhasePlan phase_plan(int n) {
  PhasePlan p;
  p.n = n;
  p.s = slow_width(n);
  TimeSeq ts = time_sequence(p.scheme());
  p.phase_times[0] = ts.base;
  p.phase_times[1] = ts.steps[0];
  std::size_t q4 = static_cast<std::size_t>(p.move4_count());
  for (std::size_t i = 1; i <= q4; ++i) p.phase_times[2] += ts.steps[i];
  for (std::size_t i = q4 + 1; i < ts.steps.size(); ++i) p.phase_times[3] += ts.steps[i];
  return p;
}

/// Seeds for [1..n]^2: base (s,2), one Move 1, then Move 4s, then Move 6s.
inline CellSet<2> slow_set(int n, VerifyMode mode = VerifyMode::final_only) {
  return realize_scheme(phase_plan(n).scheme(), cell(1, 1), mode).seeds;
}

inline Rational lower_bound_value(std::int64_t n) {
  if (n < 6) throw DomainError("lower bound stated for n >= 6");
  return Rational(13 * n * n, 18) - Rational(14 * n, 9) - Rational(5, 3);
}

inline Rational f_upper(std::int64_t n, Rational s) {
  if (s < 0 || s > n) throw DomainError("f_upper needs 0 <= s <= n");
  Rational N(n);
  return 7 * s + (N - s) * (s + 8) / 2 + 3 * (N - s) * (N - s - 2) / 8 + (N + s) * (2 * N - 1) / 6;
}

struct UpperMax {
  Rational s;
  Rational value;
};

inline UpperMax f_upper_max(std::int64_t n) {
  if (n < 1) throw DomainError("n must be positive");
  Rational s = Rational(n + 43, 3);
  s = std::clamp(s, Rational(0), Rational(n));
  return {s, f_upper(n, s)};
}

/// Coefficient c in M(n, a n) = c n^2 + O(n).
inline Rational rect_asymptote(Rational alpha) {
  if (alpha <= 0 || alpha > 1) throw DomainError("alpha must lie in (0, 1]");
  if (alpha >= Rational(1, 3)) return 2 * alpha / 3 + Rational(1, 18);
  return alpha - alpha * alpha / 2;
}

// ---------------------------------------------------------------------------
// Torus

/// An (n-2)-square perfect set with a last corner at (n-2,n-2), plus (n-1,n-1).
inline CellSet<2> torus_slow_set(int n, MemoTable& memo) {
  if (n < 4) throw DomainError("torus construction needs n >= 4");
  Realization r = perfect_realization(n - 2, n - 2, memo);
  const int m = n - 2;
  bool fx = false, fy = false;
  if (r.last_corners & kTR) {
  } else if (r.last_corners & kTL) {
    fx = true;
  } else if (r.last_corners & kBR) {
    fy = true;
  } else if (r.last_corners & kBL) {
    fx = fy = true;
  } else {
    throw ConsistencyError("perfect set has no last corner");
  }
  std::vector<Cell> out;
  for (const auto& c : r.seeds) out.push_back(cell(fx ? m + 1 - c.x() : c.x(), fy ? m + 1 - c.y() : c.y()));
  out.push_back(cell(n - 1, n - 1));
  return CellSet<2>(std::move(out));
}

inline CellSet<2> torus_slow_set(int n) {
  MemoTable memo;
  return torus_slow_set(n, memo);
}

// ---------------------------------------------------------------------------
// Higher dimensions

inline void require_supported_dimension(int d) {
  if (d < 1 || d > 3) throw DomainError("d-dimensional construction supports d in {1,2,3}, got " + std::to_string(d));
}

namespace detail {

/// Seeds in [1..dims] whose last-infected site is tracked by simulation.
template <std::size_t D>
class CuboidGrower {
 public:
  CuboidGrower(std::array<int, D> dims, std::vector<Point<D>> seeds) : dims_(dims), seeds_(std::move(seeds)) {
    refresh();
  }

  const std::array<int, D>& dims() const { return dims_; }
  const std::vector<Point<D>>& seeds() const { return seeds_; }
  std::int64_t time() const { return time_; }

  /// Extend dimension `dim` by `amount` (1 or 2) with one seed at that distance from the latest infected
  /// site on a face normal to `dim`.
  void grow(std::size_t dim, int amount) {
    Point<D> c = anchor(dim);
    Point<D> v = c;
    if (c[dim] == dims_[dim]) {
      v[dim] += amount;
    } else {
      for (auto& p : seeds_) p[dim] += amount;
      v[dim] = 1;
    }
    dims_[dim] += amount;
    seeds_.push_back(v);
    refresh();
  }

 private:
  void refresh() {
    topo_ = Topology<D>::box(dims_);
    auto rep = simulate(CellSet<D>(seeds_), topo_);
    if (!rep.percolated) throw ConsistencyError("cuboid construction stopped percolating");
    time_ = rep.total_time.value();
    times_ = std::move(rep.times);
  }

  // Latest site on either face normal to dim; ties go to the site on most faces, then the smallest index.
  Point<D> anchor(std::size_t dim) const {
    std::size_t best = times_.size();
    std::pair<std::int32_t, int> best_key{-1, -1};
    for (std::size_t i = 0; i < times_.size(); ++i) {
      Point<D> p = topo_.point(i);
      if (p[dim] != 1 && p[dim] != dims_[dim]) continue;
      int rank = 0;
      for (std::size_t d = 0; d < D; ++d) rank += (p[d] == 1 || p[d] == dims_[d]);
      std::pair<std::int32_t, int> key{times_[i], rank};
      if (key > best_key) {
        best_key = key;
        best = i;
      }
    }
    return topo_.point(best);
  }

  std::array<int, D> dims_;
  std::vector<Point<D>> seeds_;
  Topology<D> topo_;
  std::int64_t time_ = 0;
  std::vector<std::int32_t> times_;
};

}  // namespace detail

/// Seeds percolating [n]^D slowly: the planar construction, grown through the extra dimension.
template <std::size_t D>
CellSet<D> ddim_slow_set(int n) {
  require_supported_dimension(static_cast<int>(D));
  if (n < 6) throw DomainError("d-dimensional construction needs n >= 6");
  if constexpr (D == 1) {
    std::vector<Point<1>> out;
    for (auto c : detail::one_row_base(n)) out.push_back(Point<1>{{c.x()}});
    return CellSet<1>(std::move(out));
  } else if constexpr (D == 2) {
    return slow_set(n);
  } else {
    // n x ~n/3 rectangle from the planar construction without its Move 6 phase
    PhasePlan p = phase_plan(n);
    Scheme q{p.s, 2, {Move::m1}};
    q.moves.insert(q.moves.end(), static_cast<std::size_t>(p.move4_count()), Move::m4);
    Realization r = realize_scheme(q, cell(1, 1), VerifyMode::final_only);
    std::vector<Point<D>> seeds;
    for (const auto& c : r.seeds) {
      Point<D> x{};
      x[0] = c.x();
      x[1] = c.y();
      for (std::size_t d = 2; d < D; ++d) x[d] = 1;
      seeds.push_back(x);
    }
    std::array<int, D> dims{};
    dims.fill(1);
    dims[0] = r.box.width;
    dims[1] = r.box.height;
    detail::CuboidGrower<D> g(dims, std::move(seeds));
    // grow dim 1 by 2 and dim 2 by 1 until dim 1 reaches n
    while (n - g.dims()[1] >= 2) {
      g.grow(1, 2);
      g.grow(2, 1);
    }
    if (g.dims()[1] < n) g.grow(1, 1);
    // grow dim 2 by 3 until it reaches n
    while (n - g.dims()[2] >= 3) {
      g.grow(2, 2);
      g.grow(2, 1);
    }
    if (n - g.dims()[2] == 2) g.grow(2, 2);
    if (n - g.dims()[2] == 1) g.grow(2, 1);
    return CellSet<D>(g.seeds());
  }
}

template <std::size_t D>
struct Cuboid {
  Point<D> lo;
  std::array<int, D> size;

  bool contains(const Point<D>& p) const {
    for (std::size_t d = 0; d < D; ++d)
      if (p[d] < lo[d] || p[d] >= lo[d] + size[d]) return false;
    return true;
  }

  long long diameter() const {
    long long s = 0;
    for (int x : size) s += x - 1;
    return s;
  }
};

/// Fill time of the bounding cuboid from C1 and C2 fully infected is at most its diameter + 1.
template <std::size_t D>
bool diam_span_check(const Cuboid<D>& a, const Cuboid<D>& b) {
  for (std::size_t d = 0; d < D; ++d)
    if (a.size[d] < 1 || b.size[d] < 1) throw DomainError("cuboid sides must be positive");
  Cuboid<D> box;
  for (std::size_t d = 0; d < D; ++d) {
    box.lo[d] = std::min(a.lo[d], b.lo[d]);
    int hi = std::max(a.lo[d] + a.size[d], b.lo[d] + b.size[d]);
    box.size[d] = hi - box.lo[d];
  }
  std::array<int, D> dims = box.size;
  auto topo = Topology<D>::box(dims);
  std::vector<Point<D>> seeds;
  for (std::size_t i = 0; i < topo.cell_count(); ++i) {
    Point<D> p = topo.point(i);
    for (std::size_t d = 0; d < D; ++d) p[d] += box.lo[d] - 1;
    if (a.contains(p) || b.contains(p)) seeds.push_back(topo.point(i));
  }
  auto rep = simulate(CellSet<D>(std::move(seeds)), topo);
  if (!rep.percolated) throw DomainError("the two cuboids do not span a cuboid");
  return rep.total_time.value() <= box.diameter() + 1;
}

// ---------------------------------------------------------------------------
// Report

struct BoundsRow {
  int n;
  Rational lower;
  std::int64_t slow_sim;
  std::int64_t exact;
  Rational upper;
};

/// Rows for 6 <= n <= nmax; throws ConsistencyError if any row is out of order.
inline std::vector<BoundsRow> bounds_report(int nmax, MemoTable& memo, unsigned jobs = 1) {
  std::vector<BoundsRow> rows;
  if (nmax < 6) return rows;
  memo.build_square(nmax);
  rows.resize(static_cast<std::size_t>(nmax - 5));
  std::atomic<int> next{6};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    try {
      for (int n; (n = next.fetch_add(1)) <= nmax;) {
        auto rep = simulate(slow_set(n), box2(n, n));
        if (!rep.percolated) throw ConsistencyError("slow set does not percolate at n = " + std::to_string(n));
        rows[static_cast<std::size_t>(n - 6)] =
            BoundsRow{n, lower_bound_value(n), rep.total_time.value(), memo.lookup(n, n), f_upper_max(n).value};
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!err) err = std::current_exception();
      next = nmax + 1;
    }
  };
  jobs = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  for (const auto& r : rows) {
    if (!(r.lower <= r.slow_sim && r.slow_sim <= r.exact && r.upper >= r.exact))
      throw ConsistencyError("bounds out of order at n = " + std::to_string(r.n));
  }
  return rows;
}

inline void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << "n,lower,slow_sim,M,upper\n";
  for (const auto& r : rows)
    os << r.n << ',' << to_string(r.lower) << ',' << r.slow_sim << ',' << r.exact << ',' << to_string(r.upper) << '\n';
}

}  // namespace percmax
