#pragma once

#include <cmath>
#include <vector>

namespace polyevac {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2& operator+=(const Point2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point2& operator-=(const Point2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Point2 operator+(Point2 a, const Point2& b) { return a += b; }
  friend Point2 operator-(Point2 a, const Point2& b) { return a -= b; }
  friend Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }
  friend Point2 operator*(const Point2& p, double s) { return {s * p.x, s * p.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
double distance(const Point2& a, const Point2& b);
// (1-l)*a + l*b
Point2 lerp(const Point2& a, const Point2& b, double l);

// Regular n-gon inscribed in the unit circle, vertex i at angle 2*i*pi/n.
// Vertex indices are 1-based on every interface.
class PolygonGeometry {
 public:
  explicit PolygonGeometry(int n);

  int n() const { return n_; }
  const Point2& vertex(int i) const;
  const std::vector<Point2>& vertices() const { return vertices_; }
  double edge_length() const { return edge_; }
  double chord(int i, int j) const;
  // Chord length for a vertex gap m (0 <= m < n).
  double chord_for_gap(int m) const { return gap_chord_[m]; }

 private:
  int n_;
  double edge_;
  std::vector<Point2> vertices_;
  std::vector<double> gap_chord_;
  std::vector<double> chord_;  // n*n, row-major, 0-based
};

PolygonGeometry make_polygon(int n);
double chord_distance(const PolygonGeometry& g, int i, int j);

}  // namespace polyevac
