#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <tuple>
#include <vector>

#include "percmax/engine.hpp"
#include "percmax/geometry.hpp"

namespace percmax {

/// Number of boundary edges of S divided by two.
template <std::size_t D>
long long semi_perimeter(const CellSet<D>& s) {
  long long adjacent = 0;
  for (const auto& p : s)
    for (std::size_t d = 0; d < D; ++d) {
      Point<D> q = p;
      ++q[d];
      if (s.contains(q)) ++adjacent;
    }
  return static_cast<long long>(D) * static_cast<long long>(s.size()) - adjacent;
}

template <std::size_t D>
int set_distance(const CellSet<D>& a, const CellSet<D>& b) {
  if (a.empty() || b.empty()) throw DomainError("distance to an empty set");
  int best = INT_MAX;
  for (const auto& p : a)
    for (const auto& q : b) best = std::min(best, l1_distance(p, q));
  return best;
}

struct MergeNode {
  Rect rect;
  int left = -1;  // -1 for leaves (initial cells)
  int right = -1;
};

struct RectDecomposition {
  std::vector<Rect> rects;       // final rectangles, sorted
  std::vector<MergeNode> nodes;  // merge forest; leaves first, in cell order
  std::vector<int> roots;        // node ids of the final rectangles, same order as rects

  CellSet<2> covered() const {
    std::vector<Cell> out;
    for (const auto& r : rects)
      for (const auto& c : r.cells()) out.push_back(c);
    return CellSet<2>(std::move(out));
  }
};

/// Merge rectangles at distance <= 2 into their bounding rectangle until none remain.
/// Pairs are taken in order of (distance, rectangles, node ids).
inline RectDecomposition rectangle_process(const CellSet<2>& a) {
  if (a.empty()) throw DomainError("rectangle process needs a non-empty set");
  RectDecomposition out;
  std::vector<int> active;
  for (const auto& c : a) {
    active.push_back(static_cast<int>(out.nodes.size()));
    out.nodes.push_back({Rect{c, 1, 1}, -1, -1});
  }

  for (;;) {
    using Key = std::tuple<int, Rect, Rect, int, int>;
    bool found = false;
    Key best{};
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const Rect& ri = out.nodes[active[i]].rect;
        const Rect& rj = out.nodes[active[j]].rect;
        int d = rect_distance(ri, rj);
        if (d > 2) continue;
        bool swap = rj < ri || (rj == ri && active[j] < active[i]);
        Key k = swap ? Key{d, rj, ri, active[j], active[i]} : Key{d, ri, rj, active[i], active[j]};
        if (!found || k < best) {
          best = k;
          bi = i;
          bj = j;
          found = true;
        }
      }
    if (!found) break;
    int li = std::get<3>(best), ri = std::get<4>(best);
    Rect merged = bounding_rect(out.nodes[li].rect, out.nodes[ri].rect);
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back({merged, li, ri});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    active[bi] = id;
  }

  std::sort(active.begin(), active.end(),
            [&](int x, int y) { return out.nodes[x].rect < out.nodes[y].rect; });
  for (int id : active) {
    out.roots.push_back(id);
    out.rects.push_back(out.nodes[id].rect);
  }
  return out;
}

/// Time to fill the bounding rectangle starting from R1 and R2 fully infected.
inline StepTime union_span_time(const Rect& r1, const Rect& r2) {
  if (rect_distance(r1, r2) > 2) return StepTime::never();
  Rect box = bounding_rect(r1, r2);
  Cell shift = cell(1 - box.x0(), 1 - box.y0());
  CellSet<2> seeds = set_union(r1.cells(), r2.cells()).translated(shift);
  return simulate(seeds, box2(box.width, box.height)).total_time;
}

/// True iff A restricted to R spans R using only sites of R.
inline bool is_internally_spanned(const CellSet<2>& a, const Rect& r) {
  std::vector<Cell> inside;
  for (const auto& c : a)
    if (r.contains(c)) inside.push_back(cell(c.x() - r.x0() + 1, c.y() - r.y0() + 1));
  return simulate(CellSet<2>(std::move(inside)), box2(r.width, r.height)).percolated;
}

}  // namespace percmax
