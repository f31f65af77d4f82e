#include "polyevac/geometry.hpp"

#include <numbers>
#include <string>

#include "polyevac/errors.hpp"

namespace polyevac {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point2 lerp(const Point2& a, const Point2& b, double l) {
  return {(1.0 - l) * a.x + l * b.x, (1.0 - l) * a.y + l * b.y};
}

PolygonGeometry::PolygonGeometry(int n) : n_(n) {
  if (n < 3) throw InvalidPolygon("polygon needs n >= 3, got " + std::to_string(n));
  const double pi = std::numbers::pi;
  vertices_.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double a = 2.0 * i * pi / n;
    vertices_[i - 1] = {std::cos(a), std::sin(a)};
  }
  // snap axis-aligned coordinates to exact zeros
  for (auto& v : vertices_) {
    if (std::abs(v.x) < 1e-15) v.x = 0.0;
    if (std::abs(v.y) < 1e-15) v.y = 0.0;
  }
  gap_chord_.resize(n);
  for (int m = 0; m < n; ++m) gap_chord_[m] = 2.0 * std::sin(pi * m / n);
  gap_chord_[0] = 0.0;
  edge_ = gap_chord_[1];
  chord_.resize(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int m = i > j ? i - j : j - i;
      chord_[static_cast<size_t>(i) * n + j] = gap_chord_[m % n];
    }
}

const Point2& PolygonGeometry::vertex(int i) const {
  if (i < 1 || i > n_) throw IndexError("vertex index " + std::to_string(i) + " out of range");
  return vertices_[i - 1];
}

double PolygonGeometry::chord(int i, int j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_)
    throw IndexError("chord index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
  return chord_[static_cast<size_t>(i - 1) * n_ + (j - 1)];
}

PolygonGeometry make_polygon(int n) { return PolygonGeometry(n); }

double chord_distance(const PolygonGeometry& g, int i, int j) { return g.chord(i, j); }

}  // namespace polyevac
