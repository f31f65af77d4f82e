#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "polyevac/configspace.hpp"
#include "polyevac/geometry.hpp"

namespace polyevac {

// Agent positions at the stage times. positions[i][j] is agent i at t_j,
// stage 0 being the origin at t_0 = -1.
struct Trajectory {
  int n = 0;
  int k = 0;
  Configuration config;
  std::vector<double> times;
  std::vector<std::vector<Point2>> positions;
};

struct CostBreakdown {
  std::vector<double> stage_cost;  // index j-1 for stage j
  double worst_case = 0.0;
  std::vector<int> argmax_stages;  // 1-based, within 1e-9 of the worst case
};

// Largest violation of the assignment and unit-speed invariants.
double trajectory_violation(const Trajectory& tr, const PolygonGeometry& g);
// Throws InfeasibleTrajectory naming the first offending stage.
void check_trajectory(const Trajectory& tr, const PolygonGeometry& g, double tol = 1e-9);
CostBreakdown evaluate_trajectory(const Trajectory& tr, const PolygonGeometry& g, double w = 0.0);

// Trajectory where the Queen occupies the given point at every stage time
// and Servants travel at full speed between their assigned vertices.
// Stage times follow from the Queen's travel at her stages and from the
// Servants' arrivals at theirs.
std::vector<double> stage_times(const Configuration& c, const PolygonGeometry& g, const std::vector<Point2>& queen);
Trajectory trajectory_from_queen_path(const Configuration& c, const PolygonGeometry& g,
                                      const std::vector<Point2>& queen);

// ---- catalog plans --------------------------------------------------------

struct PointRef {
  enum class Kind { vertex, origin, point, anchor };
  Kind kind = Kind::origin;
  int index = 0;  // vertex index or stage of the anchor
  Point2 p;

  static PointRef V(int i) { return {Kind::vertex, i, {}}; }
  static PointRef O() { return {Kind::origin, 0, {}}; }
  static PointRef P(double x, double y) { return {Kind::point, 0, {x, y}}; }
  static PointRef Q(int stage) { return {Kind::anchor, stage, {}}; }
};

// Queen position at a stage: a fixed point, (1-l)*a + l*b, or a point of
// the square [-1,1]^2 given by two parameters.
struct Anchor {
  enum class Kind { fixed, convex, free_point };
  Kind kind = Kind::fixed;
  PointRef a;
  PointRef b;
  int param = -1;
  int param_y = -1;

  static Anchor at(PointRef p) { return {Kind::fixed, p, {}, -1, -1}; }
  static Anchor convex(PointRef p, PointRef q, int l) { return {Kind::convex, p, q, l, -1}; }
  static Anchor free(int lx, int ly) { return {Kind::free_point, {}, {}, lx, ly}; }
};

struct DistanceTerm {
  double coef;
  PointRef a;
  PointRef b;
};

struct Residual {
  enum class Kind { equal_cost, distance_sum, tight_travel };
  Kind kind = Kind::distance_sum;
  int a = 0;  // stages for equal_cost and tight_travel
  int b = 0;
  std::vector<DistanceTerm> terms;
  double constant = 0.0;
  double edge_multiple = 0.0;  // adds edge_multiple * e_n

  // cost_a - cost_b
  static Residual equal_cost(int a, int b) { return {Kind::equal_cost, a, b, {}, 0.0, 0.0}; }
  // Queen path length from stage a to b minus (t_b - t_a)
  static Residual tight_travel(int a, int b) { return {Kind::tight_travel, a, b, {}, 0.0, 0.0}; }
  static Residual distances(std::vector<DistanceTerm> t, double edge_multiple, double constant = 0.0) {
    return {Kind::distance_sum, 0, 0, std::move(t), constant, edge_multiple};
  }
};

struct WaitAnnotation {
  enum class Kind { hold, delay };
  int stage;  // the Queen idles between stage-1 and stage
  Kind kind;
};

struct QueenPlan {
  int n = 0;
  int k = 0;
  Configuration config;
  std::vector<Anchor> anchors;  // index j-1 for stage j
  std::vector<WaitAnnotation> waits;
  std::vector<Residual> residuals;
  std::vector<double> initial;  // Newton starting point, one per parameter
  int num_params() const { return static_cast<int>(initial.size()); }
};

std::vector<Point2> queen_points(const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l);
std::vector<double> plan_residuals(const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l);
// Throws InvalidInput if parameters are unused or counts disagree.
void validate_plan(const QueenPlan& plan);

struct PlanSolution {
  std::vector<double> params;
  Trajectory trajectory;
  double residual_norm = 0.0;
  int iterations = 0;
};

PlanSolution solve_plan(const QueenPlan& plan, const PolygonGeometry& g);

const std::vector<QueenPlan>& catalog();
const QueenPlan* find_plan(int n, int k);

// ---- local optimization ---------------------------------------------------

struct OptimizeOptions {
  int budget = 4000;  // total inner iterations across the annealing schedule
  double mu_start = 1e-1;
  double mu_end = 1e-8;
  int restarts = 4;
  unsigned seed = 12345;
};

Trajectory local_minimax_optimize(const Configuration& c, const PolygonGeometry& g, double w,
                                  const std::optional<Trajectory>& seed, const OptimizeOptions& opt = {});

enum class UbMethod { catalog, optimize };

// Known-good configuration for (n, k, w), if any.
std::optional<Configuration> known_configuration(int n, int k, double w);
std::pair<double, Trajectory> ub_for(int n, int k, double w, UbMethod method);

// CSV: stage,t,x0,y0,x1,y1,...
void write_trajectory_csv(const Trajectory& tr, std::ostream& os);
// Reads the CSV written above; the configuration is not part of the file.
Trajectory read_trajectory_csv(std::istream& is, const Configuration& c);
// One record per agent: agent,x y;x y;...
void write_trajectory_polylines(const Trajectory& tr, std::ostream& os);

}  // namespace polyevac
