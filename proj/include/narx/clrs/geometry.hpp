#pragma once

#include "narx/clrs/instance.hpp"

namespace narx::clrs::geometry {

/// Sign of the cross product (b - a) x (c - a): 1 left turn, -1 right, 0 collinear.
int orientation(Point a, Point b, Point c);

/// c lies within the bounding box of segment ab (meaningful when collinear).
bool on_segment(Point a, Point b, Point c);

bool segments_intersect(Point p1, Point p2, Point p3, Point p4);

/// Strict hull vertices (collinear boundary points excluded).
std::vector<bool> graham_scan(const std::vector<Point>& pts);
std::vector<bool> jarvis_march(const std::vector<Point>& pts);

}  // namespace narx::clrs::geometry
