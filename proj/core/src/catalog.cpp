#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "polyevac/errors.hpp"
#include "polyevac/upperbounds.hpp"

namespace polyevac {

namespace {

Point2 resolve(const PointRef& r, const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l,
               int depth = 0);

Point2 anchor_point(const Anchor& a, const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l,
                    int depth) {
  switch (a.kind) {
    case Anchor::Kind::fixed:
      return resolve(a.a, plan, g, l, depth + 1);
    case Anchor::Kind::convex:
      return lerp(resolve(a.a, plan, g, l, depth + 1), resolve(a.b, plan, g, l, depth + 1), l.at(a.param));
    case Anchor::Kind::free_point:
      return {-1.0 + 2.0 * l.at(a.param), -1.0 + 2.0 * l.at(a.param_y)};
  }
  return {};
}

Point2 resolve(const PointRef& r, const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l,
               int depth) {
  if (depth > plan.n) throw InvalidInput("cyclic anchor reference");
  switch (r.kind) {
    case PointRef::Kind::vertex:
      return g.vertex(r.index);
    case PointRef::Kind::origin:
      return {};
    case PointRef::Kind::point:
      return r.p;
    case PointRef::Kind::anchor:
      if (r.index < 1 || r.index > plan.n) throw InvalidInput("anchor reference out of range");
      return anchor_point(plan.anchors[r.index - 1], plan, g, l, depth);
  }
  return {};
}

// Parameters an anchor or point depends on.
void collect(const PointRef& r, const QueenPlan& plan, std::set<int>& out, int depth);

void collect(const Anchor& a, const QueenPlan& plan, std::set<int>& out, int depth) {
  if (a.param >= 0) out.insert(a.param);
  if (a.param_y >= 0) out.insert(a.param_y);
  if (a.kind != Anchor::Kind::free_point) {
    collect(a.a, plan, out, depth + 1);
    if (a.kind == Anchor::Kind::convex) collect(a.b, plan, out, depth + 1);
  }
}

void collect(const PointRef& r, const QueenPlan& plan, std::set<int>& out, int depth) {
  if (depth > plan.n) throw InvalidInput("cyclic anchor reference");
  if (r.kind == PointRef::Kind::anchor) {
    if (r.index < 1 || r.index > plan.n) throw InvalidInput("anchor reference out of range");
    collect(plan.anchors[r.index - 1], plan, out, depth);
  }
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

constexpr double kTarget = 1e-10;

}  // namespace

std::vector<Point2> queen_points(const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l) {
  std::vector<Point2> q(plan.n);
  for (int j = 0; j < plan.n; ++j) q[j] = anchor_point(plan.anchors[j], plan, g, l, 0);
  return q;
}

std::vector<double> plan_residuals(const QueenPlan& plan, const PolygonGeometry& g, const std::vector<double>& l) {
  const auto q = queen_points(plan, g, l);
  const auto t = stage_times(plan.config, g, q);
  auto cost = [&](int j) { return t[j] + distance(q[j - 1], g.vertex(plan.config.rho[j - 1])); };
  std::vector<double> out;
  out.reserve(plan.residuals.size());
  for (const auto& r : plan.residuals) {
    switch (r.kind) {
      case Residual::Kind::equal_cost:
        out.push_back(cost(r.a) - cost(r.b));
        break;
      case Residual::Kind::tight_travel: {
        double len = 0.0;
        for (int j = r.a; j < r.b; ++j) len += distance(q[j], q[j - 1]);
        out.push_back(len - (t[r.b] - t[r.a]));
        break;
      }
      case Residual::Kind::distance_sum: {
        double v = r.constant + r.edge_multiple * g.edge_length();
        for (const auto& term : r.terms) v += term.coef * distance(resolve(term.a, plan, g, l), resolve(term.b, plan, g, l));
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

void validate_plan(const QueenPlan& plan) {
  plan.config.validate();
  if (plan.n != plan.config.n || plan.k != plan.config.k) throw InvalidInput("plan id disagrees with configuration");
  if (static_cast<int>(plan.anchors.size()) != plan.n) throw InvalidInput("plan needs one anchor per stage");
  const int m = plan.num_params();
  if (static_cast<int>(plan.residuals.size()) != m) throw InvalidInput("parameter count differs from residual count");
  for (double x : plan.initial)
    if (!(x >= 0.0 && x <= 1.0)) throw ParameterOutOfBox("initial parameter outside [0,1]");

  std::set<int> used;
  for (const auto& a : plan.anchors) collect(a, plan, used, 0);
  for (int p : used)
    if (p < 0 || p >= m) throw InvalidInput("anchor uses an undeclared parameter");

  std::set<int> in_residuals;
  for (const auto& r : plan.residuals) {
    if (r.kind == Residual::Kind::distance_sum) {
      for (const auto& term : r.terms) {
        collect(term.a, plan, in_residuals, 0);
        collect(term.b, plan, in_residuals, 0);
      }
    } else {
      if (r.a < 1 || r.b < 1 || r.a > plan.n || r.b > plan.n) throw InvalidInput("residual stage out of range");
      // costs and times depend on every anchor up to the later stage
      for (int j = 1; j <= std::max(r.a, r.b); ++j) collect(plan.anchors[j - 1], plan, in_residuals, 0);
    }
  }
  for (int p = 0; p < m; ++p)
    if (!in_residuals.count(p)) throw InvalidInput("parameter " + std::to_string(p) + " appears in no residual");
}

PlanSolution solve_plan(const QueenPlan& plan, const PolygonGeometry& g) {
  validate_plan(plan);
  if (g.n() != plan.n) throw InvalidInput("polygon size differs from plan");
  const int m = plan.num_params();
  auto F = [&](const std::vector<double>& l) { return plan_residuals(plan, g, l); };
  auto clamp01 = [](std::vector<double>& l) {
    for (double& x : l) x = std::clamp(x, 0.0, 1.0);
  };

  PlanSolution sol;
  std::vector<double> l = plan.initial;
  std::vector<double> f = F(l);
  bool pushed_out = false;
  int it = 0;
  for (; m > 0 && it < 100 && inf_norm(f) > 1e-14; ++it) {
    const double h = 1e-7;
    Eigen::MatrixXd J(m, m);
    for (int c = 0; c < m; ++c) {
      auto lp = l, lm = l;
      lp[c] += h;
      lm[c] -= h;
      const auto fp = F(lp), fm = F(lm);
      for (int r = 0; r < m; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * h);
    }
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) rhs(r) = -f[r];
    const Eigen::VectorXd delta = J.colPivHouseholderQr().solve(rhs);
    if (!delta.allFinite()) break;

    const double base = two_norm(f);
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-10) {
      std::vector<double> trial(m);
      for (int c = 0; c < m; ++c) trial[c] = l[c] + step * delta(c);
      for (double x : trial)
        if (x < -1e-12 || x > 1 + 1e-12) pushed_out = true;
      clamp01(trial);
      auto ft = F(trial);
      if (two_norm(ft) < base) {
        l = std::move(trial);
        f = std::move(ft);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }

  if (m == 1 && inf_norm(f) > kTarget) {
    // bracket a sign change on a grid, then bisect
    auto f1 = [&](double x) { return F({x})[0]; };
    const int grid = 256;
    double lo = 0.0, flo = f1(0.0);
    bool found = false;
    for (int i = 1; i <= grid && !found; ++i) {
      const double hi = static_cast<double>(i) / grid, fhi = f1(hi);
      if ((flo <= 0.0) != (fhi <= 0.0)) {
        double a = lo, b = hi, fa = flo;
        for (int b_it = 0; b_it < 200 && b - a > 1e-16; ++b_it) {
          const double mid = 0.5 * (a + b), fm = f1(mid);
          if ((fa <= 0.0) == (fm <= 0.0)) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        l = {0.5 * (a + b)};
        f = F(l);
        found = true;
      }
      lo = hi;
      flo = fhi;
    }
    if (!found && pushed_out)
      throw ParameterOutOfBox("plan (" + std::to_string(plan.n) + "," + std::to_string(plan.k) +
                              ") needs a parameter outside [0,1]");
  }

  sol.residual_norm = inf_norm(f);
  sol.iterations = it;
  if (sol.residual_norm > kTarget) {
    const std::string id = "(" + std::to_string(plan.n) + "," + std::to_string(plan.k) + ")";
    const bool at_bound = std::any_of(l.begin(), l.end(), [](double x) { return x <= 0.0 || x >= 1.0; });
    if (pushed_out && at_bound) throw ParameterOutOfBox("plan " + id + " needs a parameter outside [0,1]");
    throw NoConvergence("plan " + id + " residual stuck at " + std::to_string(sol.residual_norm));
  }
  sol.params = l;
  sol.trajectory = trajectory_from_queen_path(plan.config, g, queen_points(plan, g, l));
  evaluate_trajectory(sol.trajectory, g, 0.0);
  return sol;
}

// ---- built-in plans -------------------------------------------------------

namespace {

using R = PointRef;
using A = Anchor;

DistanceTerm D(double c, PointRef a, PointRef b) { return {c, a, b}; }

Anchor V(int i) { return A::at(R::V(i)); }
Anchor O() { return A::at(R::O()); }
Anchor X(double x, double y) { return A::at(R::P(x, y)); }
Anchor C(PointRef p, PointRef q, int l) { return A::convex(p, q, l); }
Anchor Fp(int lx, int ly) { return A::free(lx, ly); }

// free-point parameter for a coordinate c in [-1,1]
double fc(double c) { return (1.0 + c) / 2.0; }

double edge(int n) { return 2.0 * std::sin(std::numbers::pi / n); }

QueenPlan make(int n, int k, std::vector<int> s, std::vector<int> rho, std::vector<Anchor> anchors,
               std::vector<Residual> res = {}, std::vector<double> initial = {},
               std::vector<WaitAnnotation> waits = {}) {
  QueenPlan p;
  p.n = n;
  p.k = k;
  p.config = Configuration{n, k, std::move(rho), std::move(s)};
  p.anchors = std::move(anchors);
  p.residuals = std::move(res);
  p.initial = std::move(initial);
  p.waits = std::move(waits);
  return p;
}

Residual eq(int a, int b) { return Residual::equal_cost(a, b); }
Residual tt(int a, int b) { return Residual::tight_travel(a, b); }
// sum of terms = e_n
Residual edge_sum(std::vector<DistanceTerm> t) { return Residual::distances(std::move(t), -1.0); }

constexpr auto hold = WaitAnnotation::Kind::hold;
constexpr auto delay = WaitAnnotation::Kind::delay;

std::vector<QueenPlan> build_catalog() {
  std::vector<QueenPlan> c;
  const auto Q = [](int j) { return R::Q(j); };
  const auto Vr = [](int i) { return R::V(i); };

  // k = 1
  c.push_back(make(3, 1, {1, 0, 0}, {1, 2, 3}, {V(2), V(2), V(3)}));
  c.push_back(make(4, 1, {1, 0, 1, 0}, {1, 2, 4, 3}, {V(2), V(2), Fp(0, 1), V(3)},
                   {edge_sum({D(1, Vr(2), Q(3))}), eq(3, 4)}, {fc(0.366), fc(-0.366)}));
  c.push_back(make(5, 1, {1, 0, 1, 0, 0}, {1, 4, 5, 3, 2}, {V(4), V(4), C(Vr(3), Vr(5), 0), V(3), V(2)},
                   {eq(3, 5)}, {0.2}, {{3, delay}}));
  c.push_back(make(6, 1, {1, 0, 1, 0, 1, 0}, {1, 2, 6, 3, 5, 4},
                   {V(2), V(2), C(Vr(3), Vr(6), 0), V(3), C(Vr(3), Vr(5), 1), V(4)},
                   {eq(3, 5), edge_sum({D(1, Q(3), Vr(3)), D(1, Vr(3), Q(5))})}, {0.07, 0.5}));
  c.push_back(make(7, 1, {0, 1, 1, 0, 1, 0, 0}, {1, 2, 3, 7, 4, 6, 5},
                   {V(1), V(1), V(7), V(7), Fp(0, 1), V(6), V(5)},
                   {edge_sum({D(1, Q(5), Vr(7))}), eq(5, 7)}, {fc(0.33162), fc(-0.55344)}));
  c.push_back(make(8, 1, {0, 1, 1, 0, 1, 0, 1, 0}, {1, 2, 3, 8, 4, 6, 5, 7},
                   {V(1), V(1), V(8), V(8), Fp(0, 1), V(6), Fp(2, 3), V(7)},
                   {edge_sum({D(1, Q(5), Vr(8))}), edge_sum({D(1, Q(5), Vr(6)), D(1, Vr(6), Q(7))}), eq(7, 8),
                    eq(5, 7)},
                   {fc(0.41287), fc(-0.49099), 0.5, fc(-0.89004)}));
  c.push_back(make(9, 1, {1, 0, 1, 0, 1, 0, 1, 0, 1}, {1, 2, 9, 3, 8, 4, 7, 5, 6},
                   {V(2), V(2), V(3), V(3), C(Vr(4), Vr(8), 0), V(4), C(Vr(4), Vr(7), 1), V(5),
                    C(Vr(5), Vr(6), 2)},
                   {edge_sum({D(1, Q(5), Vr(4)), D(1, Vr(4), Q(7))}), eq(5, 7), tt(8, 9)}, {0.06, 0.33, 0.3},
                   {{5, delay}}));
  c.push_back(make(10, 1, {1, 0, 1, 0, 1, 0, 1, 0, 1, 0}, {1, 2, 10, 3, 9, 4, 8, 6, 7, 5},
                   {V(2), V(2), V(3), V(3), C(Vr(4), Vr(9), 0), V(4), Fp(1, 2), V(6), V(6), V(5)},
                   {edge_sum({D(1, Q(5), Vr(4)), D(1, Vr(4), Q(7))}), eq(5, 7), edge_sum({D(1, Q(7), Vr(6))})},
                   {0.01, fc(-0.65457), fc(0.01064)}));
  c.push_back(make(11, 1, {1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 0}, {1, 2, 3, 11, 10, 4, 9, 5, 8, 6, 7},
                   {V(2), V(2), V(3), V(3), V(4), V(4), Fp(0, 1), V(5), C(Vr(5), Vr(8), 2), V(6), V(7)},
                   {edge_sum({D(1, Q(7), Vr(4))}), eq(7, 9), edge_sum({D(1, Q(7), Vr(5)), D(1, Vr(5), Q(9))})},
                   {fc(-0.81659), fc(0.21599), 0.27}));
  c.push_back(make(12, 1, {1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1}, {1, 2, 3, 12, 4, 11, 10, 5, 9, 8, 6, 7},
                   {V(2), V(2), V(3), V(3), V(4), V(4), Fp(0, 1), V(5), C(Vr(5), Vr(9), 2),
                    X(-0.86048, -0.17482), V(6), C(Vr(6), Vr(7), 3)},
                   {edge_sum({D(1, Q(7), Vr(4))}), eq(7, 9), edge_sum({D(1, Q(7), Vr(5)), D(1, Vr(5), Q(9))}),
                    tt(11, 12)},
                   {fc(-0.78869), fc(0.43637), 0.21, 0.5}));
  c.push_back(make(13, 1, {0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0}, {1, 2, 13, 3, 4, 12, 5, 11, 6, 7, 9, 8, 10},
                   {V(1), V(1), V(13), V(13), V(12), V(12), C(Vr(5), Vr(11), 0), V(11), C(Vr(6), Vr(11), 1),
                    X(-0.20052, -0.71402), V(9), X(-0.30447, -0.84673), V(10)},
                   {edge_sum({D(1, Q(7), Vr(11)), D(1, Vr(11), Q(9))}), eq(7, 9)}, {0.97, 0.77}));

  // k = 2
  c.push_back(make(3, 2, {1, 2, 0}, {1, 2, 3}, {O(), O(), V(3)}));
  c.push_back(make(4, 2, {1, 2, 0, 0}, {1, 2, 3, 4}, {C(R::O(), Vr(3), 0), C(R::O(), Vr(3), 0), V(3), V(4)},
                   {eq(1, 4)}, {0.7}));
  c.push_back(make(5, 2, {1, 2, 0, 1, 2}, {1, 2, 3, 5, 4}, {V(3), V(3), V(3), Fp(0, 1), V(4)},
                   {edge_sum({D(1, Vr(3), Q(4))}), eq(4, 5)}, {0.6, 0.3}));
  c.push_back(make(6, 2, {1, 2, 0, 1, 2, 0}, {1, 3, 5, 2, 4, 6}, {V(5), V(5), V(5), O(), O(), V(6)}));
  c.push_back(make(7, 2, {1, 0, 2, 1, 2, 0, 0}, {4, 6, 3, 5, 2, 7, 1},
                   {V(6), V(6), V(6), C(R::O(), Vr(7), 0), C(R::O(), Vr(7), 0), V(7), V(1)}, {eq(5, 7)}, {0.6}));
  {
    const double e8 = edge(8);
    c.push_back(make(8, 2, {1, 2, 0, 1, 2, 1, 2, 0}, {1, 3, 2, 8, 4, 7, 5, 6},
                     {V(2), V(2), V(2), X(0, 1 - e8), X(0, 1 - e8), X(0, 1 - 2 * e8), X(0, 1 - 2 * e8), V(6)}));
  }
  c.push_back(make(9, 2, {1, 2, 0, 1, 2, 0, 1, 2, 0}, {4, 5, 8, 3, 6, 9, 2, 7, 1},
                   {V(8), V(8), V(8), C(R::O(), Vr(9), 0), C(R::O(), Vr(9), 0), V(9), C(R::O(), Vr(9), 1),
                    C(R::O(), Vr(9), 1), V(1)},
                   {edge_sum({D(1, Vr(9), Q(5)), D(1, Vr(9), Q(8))}), eq(4, 7)}, {0.95, 0.37}));
  c.push_back(make(10, 2, {1, 2, 0, 1, 2, 0, 1, 2, 0, 0}, {5, 6, 9, 4, 7, 10, 3, 8, 1, 2},
                   {V(9), V(9), V(9), Fp(0, 1), Fp(0, 1), V(10), Fp(2, 3), Fp(2, 3), V(1), V(2)},
                   {edge_sum({D(1, Vr(9), Q(5))}), edge_sum({D(1, Vr(10), Q(5)), D(1, Vr(10), Q(8))}),
                    Residual::distances({D(1, Vr(3), Q(8)), D(-1, Vr(8), Q(8))}, 0.0), eq(4, 7)},
                   {fc(0.87153), fc(0.02706), fc(0.54684), fc(0.17765)}));
  c.push_back(make(11, 2, {1, 2, 0, 1, 2, 0, 1, 2, 0, 2, 0}, {5, 6, 2, 4, 7, 1, 3, 8, 10, 9, 11},
                   {V(2), V(2), V(2), C(Vr(1), Vr(7), 0), C(Vr(1), Vr(7), 0), V(1), Fp(1, 2), Fp(1, 2), V(10),
                    V(10), V(11)},
                   {edge_sum({D(1, Q(5), Vr(1)), D(1, Vr(1), Q(8))}), eq(5, 8), edge_sum({D(1, Q(8), Vr(10))})},
                   {0.0207, 0.895, 0.51}));

  // k = 3
  c.push_back(make(4, 3, {1, 2, 3, 0}, {1, 2, 3, 4}, {O(), O(), O(), V(4)}));
  {
    const Anchor a = C(R::O(), Vr(5), 0);
    c.push_back(make(5, 3, {1, 2, 3, 0, 0}, {1, 2, 3, 5, 4}, {a, a, a, V(5), V(4)}, {eq(2, 5)}, {0.6}));
  }
  c.push_back(make(6, 3, {1, 2, 3, 2, 3, 1}, {1, 3, 5, 4, 6, 2}, {O(), O(), O(), O(), O(), O()}, {}, {},
                   {{4, hold}}));
  c.push_back(make(7, 3, {1, 2, 3, 1, 2, 3, 2}, {1, 3, 6, 2, 4, 7, 5},
                   {O(), O(), O(), O(), O(), O(), C(R::O(), Vr(5), 0)}, {tt(6, 7)}, {0.5}, {{4, hold}}));
  {
    const Anchor x = X(0.13014, -0.13083);
    c.push_back(make(8, 3, {1, 2, 3, 1, 2, 3, 1, 0}, {1, 5, 3, 8, 4, 2, 7, 6},
                     {O(), O(), O(), x, x, x, C(Vr(6), Vr(7), 0), V(6)}, {eq(7, 8)}, {0.5}));
  }
  {
    const Anchor a = C(R::O(), Vr(9), 0), b = C(R::O(), Vr(9), 1);
    const double c60 = 0.5, s60 = std::sqrt(3.0) / 2.0;
    c.push_back(make(9, 3, {1, 2, 3, 0, 1, 2, 3, 1, 0}, {4, 5, 7, 9, 3, 6, 8, 2, 1},
                     {a, a, a, V(9), b, b, b, C(R::O(), R::P(c60, s60), 2), V(1)},
                     {edge_sum({D(1, Q(3), Vr(9)), D(1, Vr(9), Q(7))}), eq(1, 5), tt(7, 8)}, {0.94, 0.37, 0.79}));
  }

  // k = 4
  c.push_back(make(5, 4, {1, 2, 3, 4, 0}, {1, 2, 3, 4, 5}, {O(), O(), O(), O(), V(5)}));
  {
    const Anchor x = X(-0.75, std::sqrt(3.0) / 4.0);
    c.push_back(make(6, 4, {1, 2, 3, 4, 1, 2}, {1, 4, 6, 5, 2, 3}, {O(), O(), O(), O(), x, x}));
  }
  {
    const Anchor a = C(R::O(), Vr(7), 0);
    const Anchor x = X(std::cos(2 * std::numbers::pi / 7), 0.0);
    c.push_back(make(7, 4, {1, 2, 3, 4, 0, 2, 3}, {3, 5, 2, 4, 7, 6, 1}, {a, a, a, a, V(7), x, x},
                     {edge_sum({D(1, Q(4), Vr(7)), D(1, Vr(7), Q(7))})}, {0.5}));
  }
  c.push_back(make(8, 4, {1, 2, 3, 4, 2, 3, 4, 0}, {1, 3, 8, 6, 2, 7, 5, 4},
                   {O(), O(), O(), O(), O(), O(), O(), V(4)}, {}, {}, {{5, hold}}));
  c.push_back(make(9, 4, {1, 2, 3, 4, 1, 2, 3, 4, 0}, {1, 3, 5, 7, 2, 4, 6, 8, 9},
                   {O(), O(), O(), O(), O(), O(), O(), O(), V(9)}, {}, {}, {{5, hold}}));
  {
    const double e10 = edge(10);
    const Anchor a = C(R::O(), R::P(0, -1), 0);
    c.push_back(make(10, 4, {1, 2, 3, 4, 1, 2, 3, 4, 3, 0}, {2, 3, 5, 10, 1, 4, 6, 9, 7, 8},
                     {a, a, a, a, a, a, a, a, C(R::P(0, -e10), R::P(0, -1 - e10), 0), V(8)}, {eq(5, 9)}, {0.055},
                     {{5, hold}}));
  }
  return c;
}

}  // namespace

const std::vector<QueenPlan>& catalog() {
  static const std::vector<QueenPlan> plans = build_catalog();
  return plans;
}

const QueenPlan* find_plan(int n, int k) {
  for (const auto& p : catalog())
    if (p.n == n && p.k == k) return &p;
  return nullptr;
}

}  // namespace polyevac
