#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <limits>
#include <random>

#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/upperbounds.hpp"

namespace polyevac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Positions of all agents at stages 1..n; times follow from the largest
// displacement per stage, so every point set is a feasible trajectory once
// stage-1 points lie in the unit disk.
class MinimaxProblem {
 public:
  MinimaxProblem(const Configuration& c, const PolygonGeometry& g, double w) : c_(c), g_(g), w_(w) {
    const int n = c.n;
    fixed_.assign(c.k + 1, std::vector<bool>(n + 1, false));
    for (int j = 1; j <= n; ++j) fixed_[c.s[j - 1]][j] = true;
    for (int i = 0; i <= c.k; ++i)
      for (int j = 1; j <= n; ++j)
        if (!fixed_[i][j]) free_.push_back({i, j});
  }

  int dim() const { return 2 * static_cast<int>(free_.size()); }

  std::vector<std::vector<Point2>> positions(const std::vector<double>& x) const {
    std::vector<std::vector<Point2>> p(c_.k + 1, std::vector<Point2>(c_.n + 1));
    for (int j = 1; j <= c_.n; ++j) p[c_.s[j - 1]][j] = g_.vertex(c_.rho[j - 1]);
    for (std::size_t f = 0; f < free_.size(); ++f) p[free_[f].first][free_[f].second] = {x[2 * f], x[2 * f + 1]};
    return p;
  }

  std::vector<double> pack(const std::vector<std::vector<Point2>>& p) const {
    std::vector<double> x(dim());
    for (std::size_t f = 0; f < free_.size(); ++f) {
      const Point2& q = p[free_[f].first][free_[f].second];
      x[2 * f] = q.x;
      x[2 * f + 1] = q.y;
    }
    return x;
  }

  void project(std::vector<double>& x) const {
    for (std::size_t f = 0; f < free_.size(); ++f) {
      if (free_[f].second != 1) continue;
      const double r = std::hypot(x[2 * f], x[2 * f + 1]);
      if (r > 1.0) {
        x[2 * f] /= r;
        x[2 * f + 1] /= r;
      }
    }
  }

  Trajectory trajectory(const std::vector<double>& x) const {
    Trajectory tr;
    tr.n = c_.n;
    tr.k = c_.k;
    tr.config = c_;
    tr.positions = positions(x);
    tr.times.assign(c_.n + 1, 0.0);
    tr.times[0] = -1.0;
    for (int j = 2; j <= c_.n; ++j) {
      double m = 0.0;
      for (int i = 0; i <= c_.k; ++i) m = std::max(m, distance(tr.positions[i][j], tr.positions[i][j - 1]));
      tr.times[j] = tr.times[j - 1] + m;
    }
    return tr;
  }

  double exact(const std::vector<double>& x) const {
    const Trajectory tr = trajectory(x);
    double worst = -kInf;
    for (int j = 1; j <= c_.n; ++j) worst = std::max(worst, stage_cost(tr.positions, tr.times[j], j));
    return worst;
  }

  // log-sum-exp smoothing of the worst case, with smoothed norms
  double smooth(const std::vector<double>& x, double mu, std::vector<double>& grad) const {
    const int n = c_.n, K = c_.k + 1;
    const auto p = positions(x);
    auto snorm = [mu](const Point2& v) { return std::sqrt(v.x * v.x + v.y * v.y + mu * mu) - mu; };

    std::vector<std::vector<double>> D(K, std::vector<double>(n + 1, 0.0));
    std::vector<std::vector<double>> sigma(K, std::vector<double>(n + 1, 0.0));
    std::vector<double> t(n + 1, 0.0);
    for (int j = 2; j <= n; ++j) {
      double mx = -kInf;
      for (int i = 0; i < K; ++i) {
        D[i][j] = snorm(p[i][j] - p[i][j - 1]);
        mx = std::max(mx, D[i][j]);
      }
      double z = 0.0;
      for (int i = 0; i < K; ++i) z += (sigma[i][j] = std::exp((D[i][j] - mx) / mu));
      for (int i = 0; i < K; ++i) sigma[i][j] /= z;
      t[j] = t[j - 1] + mx + mu * std::log(z);
    }
    std::vector<double> cost(n + 1, 0.0);
    double cmax = -kInf;
    for (int j = 1; j <= n; ++j) {
      const Point2& v = g_.vertex(c_.rho[j - 1]);
      double d = snorm(p[0][j] - v);
      if (w_ > 0.0) d = (d + w_ * snorm(p[1][j] - v)) / (1.0 + w_);
      cost[j] = t[j] + d;
      cmax = std::max(cmax, cost[j]);
    }
    std::vector<double> pi(n + 1, 0.0);
    double z = 0.0;
    for (int j = 1; j <= n; ++j) z += (pi[j] = std::exp((cost[j] - cmax) / mu));
    for (int j = 1; j <= n; ++j) pi[j] /= z;
    const double value = cmax + mu * std::log(z);

    std::vector<std::vector<Point2>> gp(K, std::vector<Point2>(n + 1));
    auto dnorm = [mu](const Point2& v) { return (1.0 / std::sqrt(v.x * v.x + v.y * v.y + mu * mu)) * v; };
    for (int j = 1; j <= n; ++j) {
      const Point2& v = g_.vertex(c_.rho[j - 1]);
      gp[0][j] += (pi[j] / (1.0 + w_)) * dnorm(p[0][j] - v);
      if (w_ > 0.0) gp[1][j] += (pi[j] * w_ / (1.0 + w_)) * dnorm(p[1][j] - v);
    }
    double tail = 0.0;
    for (int j = n; j >= 2; --j) {
      tail += pi[j];
      for (int i = 0; i < K; ++i) {
        const Point2 gd = (tail * sigma[i][j]) * dnorm(p[i][j] - p[i][j - 1]);
        gp[i][j] += gd;
        gp[i][j - 1] -= gd;
      }
    }
    grad.assign(dim(), 0.0);
    for (std::size_t f = 0; f < free_.size(); ++f) {
      grad[2 * f] = gp[free_[f].first][free_[f].second].x;
      grad[2 * f + 1] = gp[free_[f].first][free_[f].second].y;
    }
    return value;
  }

  const std::vector<std::pair<int, int>>& free_points() const { return free_; }

 private:
  double stage_cost(const std::vector<std::vector<Point2>>& p, double t, int j) const {
    const Point2& v = g_.vertex(c_.rho[j - 1]);
    double d = distance(p[0][j], v);
    if (w_ > 0.0) d = (d + w_ * distance(p[1][j], v)) / (1.0 + w_);
    return t + d;
  }

  Configuration c_;
  const PolygonGeometry& g_;
  double w_;
  std::vector<std::vector<bool>> fixed_;
  std::vector<std::pair<int, int>> free_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Projected L-BFGS on the smoothed objective at a fixed temperature.
int lbfgs(const MinimaxProblem& prob, std::vector<double>& x, double mu, int max_iter) {
  const int m = 8;
  std::deque<std::vector<double>> S, Y;
  std::vector<double> g;
  double f = prob.smooth(x, mu, g);
  int it = 0;
  for (; it < max_iter; ++it) {
    std::vector<double> d = g;
    std::vector<double> alpha(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      alpha[i] = dot(S[i], d) / dot(Y[i], S[i]);
      for (std::size_t c = 0; c < d.size(); ++c) d[c] -= alpha[i] * Y[i][c];
    }
    if (!S.empty()) {
      const double gamma = dot(S.back(), Y.back()) / dot(Y.back(), Y.back());
      for (double& v : d) v *= gamma;
    }
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = dot(Y[i], d) / dot(Y[i], S[i]);
      for (std::size_t c = 0; c < d.size(); ++c) d[c] += S[i][c] * (alpha[i] - beta);
    }
    for (double& v : d) v = -v;
    if (dot(d, g) >= 0.0) {
      S.clear();
      Y.clear();
      d = g;
      for (double& v : d) v = -v;
    }

    double step = 1.0;
    std::vector<double> xn, gn;
    double fn = kInf;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      xn = x;
      for (std::size_t c = 0; c < x.size(); ++c) xn[c] += step * d[c];
      prob.project(xn);
      fn = prob.smooth(xn, mu, gn);
      std::vector<double> dx(x.size());
      for (std::size_t c = 0; c < x.size(); ++c) dx[c] = xn[c] - x[c];
      if (fn <= f + 1e-4 * dot(g, dx)) {
        ok = true;
        break;
      }
    }
    if (!ok || f - fn < 1e-15) break;
    std::vector<double> s(x.size()), y(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
      s[c] = xn[c] - x[c];
      y[c] = gn[c] - g[c];
    }
    if (dot(s, y) > 1e-16) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      if (static_cast<int>(S.size()) > m) {
        S.pop_front();
        Y.pop_front();
      }
    }
    x = std::move(xn);
    g = std::move(gn);
    f = fn;
  }
  return it;
}

// Least-squares positions of the free points from LP distances to the
// assigned vertices, started at the centroid of each agent's vertices.
std::vector<std::vector<double>> lp_starts(const MinimaxProblem& prob, const Configuration& c,
                                           const PolygonGeometry& g, double w) {
  std::vector<Point2> centroid(c.k + 1);
  std::vector<int> count(c.k + 1, 0);
  for (int j = 1; j <= c.n; ++j) {
    centroid[c.s[j - 1]] += g.vertex(c.rho[j - 1]);
    ++count[c.s[j - 1]];
  }
  for (int i = 0; i <= c.k; ++i)
    if (count[i]) centroid[i] = (1.0 / count[i]) * centroid[i];

  std::vector<std::vector<Point2>> base(c.k + 1, std::vector<Point2>(c.n + 1));
  for (const auto& [i, j] : prob.free_points()) base[i][j] = centroid[i];
  std::vector<std::vector<double>> starts;
  auto x0 = prob.pack(base);
  prob.project(x0);
  starts.push_back(x0);

  try {
    const MetricLpModel model = build_lp(c, g, w);
    const LpSolution sol = solve_certified(model);
    if (sol.status == LpStatus::optimal) {
      auto p = base;
      for (const auto& [i, j] : prob.free_points()) {
        const int a = model.point_index(i, j);
        Point2 x = centroid[i];
        for (int it = 0; it < 30; ++it) {
          double h00 = 1e-9, h01 = 0, h11 = 1e-9, b0 = 0, b1 = 0;
          for (int s = 1; s <= c.n; ++s) {
            const Point2& v = g.vertex(c.rho[s - 1]);
            const double target = sol.distance(model, a, model.assigned_point(s));
            const double r = distance(x, v);
            if (r < 1e-12) continue;
            const Point2 u = (1.0 / r) * (x - v);
            const double res = r - target;
            h00 += u.x * u.x;
            h01 += u.x * u.y;
            h11 += u.y * u.y;
            b0 += u.x * res;
            b1 += u.y * res;
          }
          const double det = h00 * h11 - h01 * h01;
          if (std::abs(det) < 1e-18) break;
          x.x -= (h11 * b0 - h01 * b1) / det;
          x.y -= (h00 * b1 - h01 * b0) / det;
        }
        if (std::isfinite(x.x) && std::isfinite(x.y)) p[i][j] = x;
      }
      auto x1 = prob.pack(p);
      prob.project(x1);
      starts.push_back(x1);
    }
  } catch (const Error&) {
  }
  return starts;
}

}  // namespace

Trajectory local_minimax_optimize(const Configuration& c, const PolygonGeometry& g, double w,
                                  const std::optional<Trajectory>& seed, const OptimizeOptions& opt) {
  c.validate();
  if (g.n() != c.n) throw InvalidInput("polygon size differs from configuration");
  if (w < 0.0 || w > 1.0) throw InvalidInput("w must lie in [0,1]");
  if (w > 0.0 && c.k != 1) throw UnsupportedWeightedK("weighted cost needs k = 1");
  MinimaxProblem prob(c, g, w);

  std::vector<std::vector<double>> starts;
  double seed_cost = kInf;
  if (seed) {
    if (!(seed->config == c)) throw InvalidInput("seed trajectory has a different configuration");
    seed_cost = evaluate_trajectory(*seed, g, w).worst_case;
    auto x = prob.pack(seed->positions);
    prob.project(x);
    starts.push_back(std::move(x));
  } else {
    starts = lp_starts(prob, c, g, w);
  }
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, 0.05);
  const std::size_t base_starts = starts.size();
  for (int r = 0; r < opt.restarts; ++r) {
    auto x = starts[r % base_starts];
    for (double& v : x) v += noise(rng);
    prob.project(x);
    starts.push_back(std::move(x));
  }

  std::vector<double> best;
  double best_cost = kInf;
  auto consider = [&](const std::vector<double>& x) {
    const double v = prob.exact(x);
    if (v < best_cost) {
      best_cost = v;
      best = x;
    }
  };

  const int levels = std::max(1, static_cast<int>(std::ceil(std::log10(opt.mu_start / opt.mu_end))) * 2);
  const int per_level = std::max(10, opt.budget / (levels * static_cast<int>(starts.size())));
  for (auto x : starts) {
    consider(x);
    for (int lvl = 0; lvl <= levels; ++lvl) {
      const double mu = opt.mu_start * std::pow(opt.mu_end / opt.mu_start, static_cast<double>(lvl) / levels);
      lbfgs(prob, x, mu, per_level);
      consider(x);
    }
  }
  if (best.empty()) throw NoConvergence("optimizer produced no feasible point");

  Trajectory tr = prob.trajectory(best);
  check_trajectory(tr, g);
  if (seed && seed_cost < evaluate_trajectory(tr, g, w).worst_case) return *seed;
  return tr;
}

std::optional<Configuration> known_configuration(int n, int k, double w) {
  if (w > 0.0) {
    if (k != 1) return std::nullopt;
    if (auto c = weighted_fixed_configuration(n)) return c;
  }
  if (const auto* row = find_lp_reference(n, k)) return row->config();
  return std::nullopt;
}

std::pair<double, Trajectory> ub_for(int n, int k, double w, UbMethod method) {
  const PolygonGeometry g(n);
  if (method == UbMethod::catalog) {
    if (w != 0.0) throw InvalidInput("catalog plans are unweighted; use w = 0");
    const QueenPlan* plan = find_plan(n, k);
    if (!plan) throw NoKnownConfiguration("no catalog plan for n=" + std::to_string(n) + " k=" + std::to_string(k));
    PlanSolution sol = solve_plan(*plan, g);
    const double v = evaluate_trajectory(sol.trajectory, g, 0.0).worst_case;
    return {v, std::move(sol.trajectory)};
  }
  const auto cfg = known_configuration(n, k, w);
  if (!cfg)
    throw NoKnownConfiguration("no known configuration for n=" + std::to_string(n) + " k=" + std::to_string(k) +
                               "; supply one");
  std::optional<Trajectory> seed;
  if (const QueenPlan* plan = find_plan(n, k); plan && plan->config == *cfg) {
    try {
      seed = solve_plan(*plan, g).trajectory;
    } catch (const Error&) {
    }
  }
  Trajectory best = local_minimax_optimize(*cfg, g, w, std::nullopt);
  double best_v = evaluate_trajectory(best, g, w).worst_case;
  if (seed) {
    Trajectory t2 = local_minimax_optimize(*cfg, g, w, seed);
    const double v2 = evaluate_trajectory(t2, g, w).worst_case;
    if (v2 < best_v) {
      best = std::move(t2);
      best_v = v2;
    }
  }
  return {best_v, std::move(best)};
}

}  // namespace polyevac
