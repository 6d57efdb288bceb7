#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "percmax/errors.hpp"

namespace percmax {

inline constexpr std::size_t kMaxDim = 4;

/// A lattice site. Coordinates are 1-indexed; coordinate 0 is x (column),
/// coordinate 1 is y (row, counted upwards).
template <std::size_t D>
struct Point {
  static_assert(D >= 1 && D <= kMaxDim);
  std::array<int, D> c{};

  constexpr int& operator[](std::size_t i) { return c[i]; }
  constexpr int operator[](std::size_t i) const { return c[i]; }

  constexpr int x() const { return c[0]; }
  constexpr int y() const requires(D >= 2) { return c[1]; }

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
};

using Cell = Point<2>;

constexpr Cell cell(int x, int y) { return Cell{{x, y}}; }

template <std::size_t D>
constexpr int l1_distance(const Point<D>& a, const Point<D>& b) {
  int d = 0;
  for (std::size_t i = 0; i < D; ++i) d += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return d;
}

/// A finite set of sites, kept sorted and deduplicated.
template <std::size_t D>
class CellSet {
 public:
  using value_type = Point<D>;
  using const_iterator = typename std::vector<Point<D>>::const_iterator;

  CellSet() = default;
  CellSet(std::initializer_list<Point<D>> pts) : cells_(pts) { normalize(); }
  explicit CellSet(std::vector<Point<D>> pts) : cells_(std::move(pts)) { normalize(); }

  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  const_iterator begin() const noexcept { return cells_.begin(); }
  const_iterator end() const noexcept { return cells_.end(); }
  const std::vector<Point<D>>& cells() const noexcept { return cells_; }

  bool contains(const Point<D>& p) const {
    return std::binary_search(cells_.begin(), cells_.end(), p);
  }

  void insert(const Point<D>& p) {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), p);
    if (it != cells_.end() && *it == p) return;
    cells_.insert(it, p);
    extend_box(p);
  }

  /// Minimal axis-aligned box: {lowest corner, highest corner}.
  std::optional<std::pair<Point<D>, Point<D>>> bounding_box() const {
    if (cells_.empty()) return std::nullopt;
    return std::make_pair(lo_, hi_);
  }

  CellSet translated(const Point<D>& offset) const {
    std::vector<Point<D>> out = cells_;
    for (auto& p : out)
      for (std::size_t i = 0; i < D; ++i) p[i] += offset[i];
    return CellSet(std::move(out));
  }

  friend bool operator==(const CellSet& a, const CellSet& b) { return a.cells_ == b.cells_; }

  friend CellSet set_union(const CellSet& a, const CellSet& b) {
    std::vector<Point<D>> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return CellSet(std::move(out));
  }

 private:
  void normalize() {
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    if (cells_.empty()) return;
    lo_ = hi_ = cells_.front();
    for (const auto& p : cells_) extend_box(p);
  }

  void extend_box(const Point<D>& p) {
    if (cells_.size() == 1) {
      lo_ = hi_ = p;
      return;
    }
    for (std::size_t i = 0; i < D; ++i) {
      lo_[i] = std::min(lo_[i], p[i]);
      hi_[i] = std::max(hi_[i], p[i]);
    }
  }

  std::vector<Point<D>> cells_;
  Point<D> lo_{};
  Point<D> hi_{};
};

/// Axis-aligned rectangle {x0..x0+width-1} x {y0..y0+height-1}.
struct Rect {
  Cell origin{};
  int width = 1;
  int height = 1;

  int x0() const { return origin.x(); }
  int y0() const { return origin.y(); }
  int x1() const { return origin.x() + width - 1; }
  int y1() const { return origin.y() + height - 1; }

  int semi_perimeter() const { return width + height; }
  long long area() const { return static_cast<long long>(width) * height; }

  bool contains(const Cell& c) const {
    return c.x() >= x0() && c.x() <= x1() && c.y() >= y0() && c.y() <= y1();
  }

  CellSet<2> cells() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(area()));
    for (int x = x0(); x <= x1(); ++x)
      for (int y = y0(); y <= y1(); ++y) out.push_back(cell(x, y));
    return CellSet<2>(std::move(out));
  }

  friend auto operator<=>(const Rect&, const Rect&) = default;
};

inline Rect make_rect(int x0, int y0, int width, int height) {
  if (width < 1 || height < 1) throw DomainError("rectangle dimensions must be positive");
  return Rect{cell(x0, y0), width, height};
}

/// l1 distance between the site sets of two rectangles; 0 iff they overlap.
inline int rect_distance(const Rect& a, const Rect& b) {
  int dx = std::max({0, b.x0() - a.x1(), a.x0() - b.x1()});
  int dy = std::max({0, b.y0() - a.y1(), a.y0() - b.y1()});
  return dx + dy;
}

inline Rect bounding_rect(const Rect& a, const Rect& b) {
  int x0 = std::min(a.x0(), b.x0()), y0 = std::min(a.y0(), b.y0());
  int x1 = std::max(a.x1(), b.x1()), y1 = std::max(a.y1(), b.y1());
  return Rect{cell(x0, y0), x1 - x0 + 1, y1 - y0 + 1};
}

enum class TopologyKind { box, torus };

template <std::size_t D>
struct Topology {
  TopologyKind kind = TopologyKind::box;
  std::array<int, D> dims{};
  int threshold = 2;

  static Topology box(std::array<int, D> dims, int threshold = 2) {
    Topology t{TopologyKind::box, dims, threshold};
    t.validate();
    return t;
  }

  static Topology torus(int n, int threshold = 2) requires(D == 2) {
    Topology t{TopologyKind::torus, {n, n}, threshold};
    t.validate();
    return t;
  }

  void validate() const {
    for (int d : dims)
      if (d < 1) throw DomainError("topology dimensions must be positive");
    if (threshold < 1) throw DomainError("threshold must be at least 1");
    if (kind == TopologyKind::torus) {
      if (D != 2) throw DomainError("torus topology is only defined for d = 2");
      if (dims[0] != dims[D - 1]) throw DomainError("torus must be square");
    }
  }

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }

  bool contains(const Point<D>& p) const {
    for (std::size_t i = 0; i < D; ++i)
      if (p[i] < 1 || p[i] > dims[i]) return false;
    return true;
  }

  /// Row-major index, coordinate 0 varying fastest.
  std::size_t index(const Point<D>& p) const {
    std::size_t idx = 0;
    for (std::size_t i = D; i-- > 0;) idx = idx * static_cast<std::size_t>(dims[i]) + (p[i] - 1);
    return idx;
  }

  Point<D> point(std::size_t idx) const {
    Point<D> p;
    for (std::size_t i = 0; i < D; ++i) {
      p[i] = static_cast<int>(idx % static_cast<std::size_t>(dims[i])) + 1;
      idx /= static_cast<std::size_t>(dims[i]);
    }
    return p;
  }

  void require_contains(const CellSet<D>& s) const {
    for (const auto& p : s)
      if (!contains(p)) throw DomainError("cell out of bounds");
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Infection time of a site: a non-negative step count, or never.
class StepTime {
 public:
  constexpr StepTime() = default;
  constexpr explicit StepTime(std::int64_t steps) : v_(steps) {
    if (steps < 0) throw DomainError("step time must be non-negative");
  }
  static constexpr StepTime never() {
    StepTime t;
    t.v_ = -1;
    return t;
  }

  constexpr bool is_never() const { return v_ < 0; }
  constexpr std::int64_t value() const {
    if (is_never()) throw DomainError("arithmetic on a never-infected time");
    return v_;
  }

  friend constexpr StepTime operator+(StepTime a, std::int64_t d) { return StepTime(a.value() + d); }

  friend constexpr bool operator==(StepTime a, StepTime b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(StepTime a, StepTime b) {
    if (a.is_never() || b.is_never()) return a.is_never() <=> b.is_never();
    return a.v_ <=> b.v_;
  }

  std::string to_string() const { return is_never() ? "never" : std::to_string(v_); }

 private:
  std::int64_t v_ = 0;
};

}  // namespace percmax
