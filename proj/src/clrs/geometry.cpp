#include "narx/clrs/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace narx::clrs::geometry {

namespace {

// Coordinates fit in 21 bits, so products stay well inside int64.
std::int64_t cross(Point a, Point b, Point c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

std::int64_t dist2(Point a, Point b) {
  const auto dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::size_t lowest(const std::vector<Point>& pts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].y < pts[best].y || (pts[i].y == pts[best].y && pts[i].x < pts[best].x)) best = i;
  return best;
}

}  // namespace

int orientation(Point a, Point b, Point c) {
  const auto v = cross(a, b, c);
  return (v > 0) - (v < 0);
}

bool on_segment(Point a, Point b, Point c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point p1, Point p2, Point p3, Point p4) {
  const int d1 = orientation(p3, p4, p1);
  const int d2 = orientation(p3, p4, p2);
  const int d3 = orientation(p1, p2, p3);
  const int d4 = orientation(p1, p2, p4);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(p3, p4, p1)) return true;
  if (d2 == 0 && on_segment(p3, p4, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, p3)) return true;
  if (d4 == 0 && on_segment(p1, p2, p4)) return true;
  return false;
}

std::vector<bool> graham_scan(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<bool> hull(n, false);
  if (n == 0) return hull;
  const std::size_t pivot = lowest(pts);
  const Point p0 = pts[pivot];
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (i != pivot) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto c = cross(p0, pts[a], pts[b]);
    if (c != 0) return c > 0;
    return dist2(p0, pts[a]) < dist2(p0, pts[b]);
  });
  // The last ray is walked outside-in so its inner points sit on the closing
  // edge and get removed below.
  if (!order.empty()) {
    auto group = order.end() - 1;
    while (group != order.begin() && cross(p0, pts[*(group - 1)], pts[order.back()]) == 0) --group;
    if (group != order.begin()) std::reverse(group, order.end());
  }
  std::vector<std::size_t> stack{pivot};
  for (std::size_t i : order) {
    while (stack.size() >= 2 && cross(pts[stack[stack.size() - 2]], pts[stack.back()], pts[i]) <= 0)
      stack.pop_back();
    stack.push_back(i);
  }
  // Points collinear with the closing edge back to the pivot.
  while (stack.size() >= 3 && cross(pts[stack[stack.size() - 2]], pts[stack.back()], p0) <= 0)
    stack.pop_back();
  for (std::size_t i : stack) hull[i] = true;
  return hull;
}

std::vector<bool> jarvis_march(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<bool> hull(n, false);
  if (n == 0) return hull;
  const std::size_t start = lowest(pts);
  std::size_t p = start;
  do {
    hull[p] = true;
    std::size_t q = p == 0 ? 1 % n : 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == p) continue;
      const auto c = cross(pts[p], pts[q], pts[r]);
      if (c < 0 || (c == 0 && dist2(pts[p], pts[r]) > dist2(pts[p], pts[q]))) q = r;
    }
    p = q;
  } while (p != start && n > 1);
  return hull;
}

}  // namespace narx::clrs::geometry
