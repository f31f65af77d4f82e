#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "polyevac/errors.hpp"
#include "polyevac/upperbounds.hpp"

namespace polyevac {

namespace {

struct Waypoint {
  double t;
  Point2 p;
};

Point2 position_at(const std::vector<Waypoint>& path, double t) {
  if (t <= path.front().t) return path.front().p;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (t <= path[i].t) {
      const double span = path[i].t - path[i - 1].t;
      if (span <= 0.0) return path[i].p;
      return lerp(path[i - 1].p, path[i].p, (t - path[i - 1].t) / span);
    }
  }
  return path.back().p;
}

std::string stage_msg(const std::string& what, int stage) {
  return what + " at stage " + std::to_string(stage);
}

}  // namespace

std::vector<double> stage_times(const Configuration& c, const PolygonGeometry& g, const std::vector<Point2>& queen) {
  const int n = c.n;
  if (static_cast<int>(queen.size()) != n) throw InvalidInput("queen path needs one point per stage");
  std::vector<double> t(n + 1, 0.0);
  t[0] = -1.0;
  std::vector<int> last_stage(c.k + 1, 0);
  for (int j = 1; j <= n; ++j) {
    const int a = c.s[j - 1];
    if (a == 0) {
      t[j] = j == 1 ? 0.0 : t[j - 1] + distance(queen[j - 1], queen[j - 2]);
    } else {
      double ready = 0.0;
      if (last_stage[a] > 0) ready = t[last_stage[a]] + g.chord(c.rho[last_stage[a] - 1], c.rho[j - 1]);
      t[j] = std::max(j == 1 ? 0.0 : t[j - 1], ready);
      last_stage[a] = j;
    }
  }
  return t;
}

Trajectory trajectory_from_queen_path(const Configuration& c, const PolygonGeometry& g,
                                      const std::vector<Point2>& queen) {
  c.validate();
  Trajectory tr;
  tr.n = c.n;
  tr.k = c.k;
  tr.config = c;
  tr.times = stage_times(c, g, queen);
  tr.positions.assign(c.k + 1, std::vector<Point2>(c.n + 1));
  for (int j = 1; j <= c.n; ++j) tr.positions[0][j] = queen[j - 1];

  for (int a = 1; a <= c.k; ++a) {
    std::vector<Waypoint> path{{-1.0, {}}};
    for (int j = 1; j <= c.n; ++j) {
      if (c.s[j - 1] != a) continue;
      const Point2& v = g.vertex(c.rho[j - 1]);
      if (path.size() == 1) {
        path.push_back({0.0, v});
      } else {
        const Waypoint prev = path.back();
        path.push_back({prev.t + distance(prev.p, v), v});
      }
      path.push_back({tr.times[j], v});
    }
    for (int j = 1; j <= c.n; ++j) tr.positions[a][j] = position_at(path, tr.times[j]);
  }
  return tr;
}

double trajectory_violation(const Trajectory& tr, const PolygonGeometry& g) {
  double worst = 0.0;
  const Configuration& c = tr.config;
  worst = std::max(worst, std::abs(tr.times[0] + 1.0));
  worst = std::max(worst, std::abs(tr.times[1]));
  for (int j = 1; j <= tr.n; ++j)
    worst = std::max(worst, distance(tr.positions[c.s[j - 1]][j], g.vertex(c.rho[j - 1])));
  for (int i = 0; i <= tr.k; ++i) {
    worst = std::max(worst, norm(tr.positions[i][0]));
    for (int j = 0; j < tr.n; ++j) {
      const double d = distance(tr.positions[i][j + 1], tr.positions[i][j]);
      worst = std::max(worst, d - (tr.times[j + 1] - tr.times[j]));
    }
  }
  return worst;
}

void check_trajectory(const Trajectory& tr, const PolygonGeometry& g, double tol) {
  const Configuration& c = tr.config;
  c.validate();
  if (tr.n != c.n || tr.k != c.k || g.n() != tr.n) throw InfeasibleTrajectory("trajectory size mismatch", 0);
  if (static_cast<int>(tr.times.size()) != tr.n + 1 || static_cast<int>(tr.positions.size()) != tr.k + 1)
    throw InfeasibleTrajectory("trajectory size mismatch", 0);
  for (const auto& row : tr.positions)
    if (static_cast<int>(row.size()) != tr.n + 1) throw InfeasibleTrajectory("trajectory size mismatch", 0);
  if (std::abs(tr.times[0] + 1.0) > tol || std::abs(tr.times[1]) > tol)
    throw InfeasibleTrajectory("expected t0 = -1 and t1 = 0", 1);
  for (int i = 0; i <= tr.k; ++i)
    if (norm(tr.positions[i][0]) > tol) throw InfeasibleTrajectory(stage_msg("agent not at origin", 0), 0);
  for (int j = 0; j < tr.n; ++j) {
    const double dt = tr.times[j + 1] - tr.times[j];
    if (dt < -tol) throw InfeasibleTrajectory(stage_msg("time decreases", j + 1), j + 1);
    for (int i = 0; i <= tr.k; ++i)
      if (distance(tr.positions[i][j + 1], tr.positions[i][j]) > dt + tol)
        throw InfeasibleTrajectory(stage_msg("agent " + std::to_string(i) + " exceeds unit speed", j + 1), j + 1);
  }
  for (int j = 1; j <= tr.n; ++j)
    if (distance(tr.positions[c.s[j - 1]][j], g.vertex(c.rho[j - 1])) > tol)
      throw InfeasibleTrajectory(stage_msg("assigned vertex missed", j), j);
}

CostBreakdown evaluate_trajectory(const Trajectory& tr, const PolygonGeometry& g, double w) {
  if (w < 0.0 || w > 1.0) throw InvalidInput("w must lie in [0,1]");
  if (w > 0.0 && tr.k != 1) throw UnsupportedWeightedK("weighted cost needs k = 1");
  check_trajectory(tr, g);
  CostBreakdown cb;
  cb.stage_cost.resize(tr.n);
  cb.worst_case = -std::numeric_limits<double>::infinity();
  for (int j = 1; j <= tr.n; ++j) {
    const Point2& v = g.vertex(tr.config.rho[j - 1]);
    double d = distance(tr.positions[0][j], v);
    if (w > 0.0) d = (d + w * distance(tr.positions[1][j], v)) / (1.0 + w);
    cb.stage_cost[j - 1] = tr.times[j] + d;
    cb.worst_case = std::max(cb.worst_case, cb.stage_cost[j - 1]);
  }
  for (int j = 1; j <= tr.n; ++j)
    if (cb.stage_cost[j - 1] >= cb.worst_case - 1e-9) cb.argmax_stages.push_back(j);
  return cb;
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
  os << "stage,t";
  for (int i = 0; i <= tr.k; ++i) os << ",x" << i << ",y" << i;
  os << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int j = 0; j <= tr.n; ++j) {
    os << j << ',' << tr.times[j];
    for (int i = 0; i <= tr.k; ++i) os << ',' << tr.positions[i][j].x << ',' << tr.positions[i][j].y;
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is, const Configuration& c) {
  c.validate();
  Trajectory tr;
  tr.n = c.n;
  tr.k = c.k;
  tr.config = c;
  tr.times.assign(c.n + 1, 0.0);
  tr.positions.assign(c.k + 1, std::vector<Point2>(c.n + 1));
  std::string line;
  if (!std::getline(is, line) || line.rfind("stage,t", 0) != 0) throw ParseError("trajectory CSV lacks header");
  std::vector<bool> seen(c.n + 1, false);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> f;
    std::stringstream ss(line);
    std::string cell;
    try {
      while (std::getline(ss, cell, ',')) f.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw ParseError("bad number in trajectory row: " + line);
    }
    if (static_cast<int>(f.size()) != 2 + 2 * (c.k + 1)) throw ParseError("trajectory row has wrong width: " + line);
    const int j = static_cast<int>(f[0]);
    if (j < 0 || j > c.n || f[0] != j) throw ParseError("bad stage in trajectory row: " + line);
    tr.times[j] = f[1];
    for (int i = 0; i <= c.k; ++i) tr.positions[i][j] = {f[2 + 2 * i], f[3 + 2 * i]};
    seen[j] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ParseError("trajectory CSV misses stages");
  return tr;
}

void write_trajectory_polylines(const Trajectory& tr, std::ostream& os) {
  os << "agent,points\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i <= tr.k; ++i) {
    os << i << ',';
    for (int j = 0; j <= tr.n; ++j) {
      if (j) os << ';';
      os << tr.positions[i][j].x << ' ' << tr.positions[i][j].y;
    }
    os << '\n';
  }
}

}  // namespace polyevac
