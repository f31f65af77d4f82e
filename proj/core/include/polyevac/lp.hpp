#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "polyevac/configspace.hpp"
#include "polyevac/geometry.hpp"

namespace polyevac {

// (agent, stage); the shared origin is {0, 0}.
struct PointLabel {
  int agent = 0;
  int stage = 0;
  friend auto operator<=>(const PointLabel&, const PointLabel&) = default;
};

enum class RowKind { speed, objective, nonnegativity, triangle };

struct LpTerm {
  int var;
  double coef;
};

// sum(terms) >= rhs
struct LpRow {
  RowKind kind;
  std::vector<LpTerm> terms;
  double rhs;
  std::string name;
};

// Metric relaxation for one configuration. Variables are t_0..t_n, y and one
// distance per unordered pair of points. Triangle rows are implicit: there
// are 3*C(m,3) of them and they are produced on demand.
class MetricLpModel {
 public:
  Configuration config;
  double w = 0.0;
  bool presets = false;
  std::vector<PointLabel> points;       // points[0] is the origin
  std::vector<std::optional<double>> fixed;  // pinned value per variable
  std::vector<LpRow> speed_rows;
  std::vector<LpRow> objective_rows;

  int n() const { return config.n; }
  int k() const { return config.k; }
  int num_points() const { return static_cast<int>(points.size()); }
  int point_index(int agent, int stage) const;
  // Point visiting the stage-j vertex.
  int assigned_point(int stage) const { return point_index(config.s[stage - 1], stage); }

  int t_var(int j) const { return j; }
  int y_var() const { return n() + 1; }
  int first_dist_var() const { return n() + 2; }
  int num_dist_vars() const { return num_points() * (num_points() - 1) / 2; }
  int num_vars() const { return first_dist_var() + num_dist_vars(); }
  int pair_index(int a, int b) const;
  int d_var(int a, int b) const { return first_dist_var() + pair_index(a, b); }
  std::pair<int, int> pair_of(int dist_var) const;
  bool is_dist_var(int v) const { return v >= first_dist_var(); }

  std::uint64_t triangle_row_count() const;
  std::uint64_t nonnegativity_row_count() const { return static_cast<std::uint64_t>(num_dist_vars()); }
  // Calls f(a, b, c) for each row d_ac + d_cb - d_ab >= 0.
  void for_each_triangle(const std::function<void(int, int, int)>& f) const;
  LpRow triangle_row(int a, int b, int c) const;

  std::string var_name(int v) const;
};

MetricLpModel build_lp(const Configuration& c, const PolygonGeometry& g, double w, bool presets = false);

enum class LpStatus { optimal, infeasible, unbounded, numeric_failure };
const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::numeric_failure;
  double value = 0.0;
  std::vector<double> times;      // t_0..t_n
  std::vector<double> distances;  // by pair index
  double certificate_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  int cuts = 0;
  int rounds = 0;

  double distance(const MetricLpModel& m, int a, int b) const {
    return a == b ? 0.0 : distances[m.pair_index(a, b)];
  }
};

struct SolveOptions {
  double certify_tol = 1e-9;
  double separation_tol = 1e-10;
  int max_rounds = 200;
  int max_iterations = 50000;
  bool bland = false;
};

// Solves the model and checks a primal-dual certificate against every row
// of the full model (including all triangle rows).
LpSolution solve_certified(const MetricLpModel& m, const SolveOptions& opt = {});

// build_lp + solve_certified; throws NumericFailure if no certificate.
double config_lp_value(const Configuration& c, const PolygonGeometry& g, double w, bool presets = false);

// Number of leading stages whose agents are pairwise distinct.
int distinct_agent_prefix(const Configuration& c);

// LP text format: objective, constraint rows, bounds.
void write_lp_text(const MetricLpModel& m, std::ostream& os);

}  // namespace polyevac
