#include "polyevac/lp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "polyevac/dual_simplex.hpp"
#include "polyevac/errors.hpp"

namespace polyevac {

int MetricLpModel::point_index(int agent, int stage) const {
  if (stage == 0) return 0;
  return 1 + agent * n() + (stage - 1);
}

int MetricLpModel::pair_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  const int m = num_points();
  return a * m - a * (a + 1) / 2 + (b - a - 1);
}

std::pair<int, int> MetricLpModel::pair_of(int dist_var) const {
  int idx = dist_var - first_dist_var();
  const int m = num_points();
  int a = 0;
  while (idx >= m - a - 1) {
    idx -= m - a - 1;
    ++a;
  }
  return {a, a + 1 + idx};
}

std::uint64_t MetricLpModel::triangle_row_count() const {
  const std::uint64_t m = static_cast<std::uint64_t>(num_points());
  return m < 3 ? 0 : 3 * (m * (m - 1) * (m - 2) / 6);
}

void MetricLpModel::for_each_triangle(const std::function<void(int, int, int)>& f) const {
  const int m = num_points();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        f(a, b, c);  // d_ab <= d_ac + d_cb
        f(a, c, b);
        f(b, c, a);
      }
}

LpRow MetricLpModel::triangle_row(int a, int b, int c) const {
  LpRow row{RowKind::triangle, {{d_var(a, c), 1.0}, {d_var(c, b), 1.0}, {d_var(a, b), -1.0}}, 0.0, {}};
  const auto& pa = points[a];
  const auto& pb = points[b];
  const auto& pc = points[c];
  row.name = "tri_" + std::to_string(pa.agent) + "_" + std::to_string(pa.stage) + "_" +
             std::to_string(pb.agent) + "_" + std::to_string(pb.stage) + "_" + std::to_string(pc.agent) +
             "_" + std::to_string(pc.stage);
  return row;
}

std::string MetricLpModel::var_name(int v) const {
  if (v <= n()) return "t" + std::to_string(v);
  if (v == y_var()) return "y";
  auto [a, b] = pair_of(v);
  const auto& pa = points[a];
  const auto& pb = points[b];
  return "d_" + std::to_string(pa.agent) + "_" + std::to_string(pa.stage) + "_" + std::to_string(pb.agent) +
         "_" + std::to_string(pb.stage);
}

int distinct_agent_prefix(const Configuration& c) {
  std::vector<char> used(c.k + 1, 0);
  int p = 0;
  for (int a : c.s) {
    if (used[a]) break;
    used[a] = 1;
    ++p;
  }
  return p;
}

MetricLpModel build_lp(const Configuration& c, const PolygonGeometry& g, double w, bool presets) {
  c.validate();
  if (g.n() != c.n) throw InvalidConfiguration("geometry and configuration disagree on n");
  if (w < 0.0 || w > 1.0) throw InvalidInput("weight w must lie in [0, 1]");
  if (w > 0.0 && c.k != 1) throw UnsupportedWeightedK("weighted objective requires k = 1");

  MetricLpModel m;
  m.config = c;
  m.w = w;
  m.presets = presets;
  const int n = c.n;
  const int k = c.k;
  m.points.push_back({0, 0});
  for (int i = 0; i <= k; ++i)
    for (int j = 1; j <= n; ++j) m.points.push_back({i, j});
  m.fixed.assign(m.num_vars(), std::nullopt);

  m.fixed[m.t_var(0)] = -1.0;
  m.fixed[m.t_var(1)] = 0.0;
  if (presets) {
    const int p = distinct_agent_prefix(c);
    for (int j = 2; j <= p; ++j) m.fixed[m.t_var(j)] = 0.0;
  }
  for (int j = 1; j <= n; ++j) {
    const int pj = m.assigned_point(j);
    m.fixed[m.d_var(0, pj)] = 1.0;
    for (int l = j + 1; l <= n; ++l)
      m.fixed[m.d_var(pj, m.assigned_point(l))] = g.chord(c.rho[j - 1], c.rho[l - 1]);
  }

  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= k; ++i) {
      LpRow row{RowKind::speed,
                {{m.t_var(j + 1), 1.0}, {m.t_var(j), -1.0}, {m.d_var(m.point_index(i, j + 1), m.point_index(i, j)), -1.0}},
                0.0,
                "s" + std::to_string(i) + "_" + std::to_string(j)};
      m.speed_rows.push_back(std::move(row));
    }

  const double wq = 1.0 / (1.0 + w);
  const double ws = w / (1.0 + w);
  for (int j = 1; j <= n; ++j) {
    LpRow row{RowKind::objective, {{m.y_var(), 1.0}, {m.t_var(j), -1.0}}, 0.0, "o" + std::to_string(j)};
    const int pj = m.assigned_point(j);
    const int q = m.point_index(0, j);
    if (q != pj) row.terms.push_back({m.d_var(q, pj), -wq});
    if (w > 0.0) {
      const int sv = m.point_index(1, j);
      if (sv != pj) row.terms.push_back({m.d_var(sv, pj), -ws});
    }
    m.objective_rows.push_back(std::move(row));
  }
  return m;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::numeric_failure: return "numeric-failure";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cut {
  int row;
  std::vector<int> path;  // p0 .. pk, long edge is (p0, pk)
};

// All-pairs shortest paths with next-hop reconstruction.
struct ShortestPaths {
  int m;
  std::vector<double> dist;
  std::vector<int> next;

  explicit ShortestPaths(int m_) : m(m_), dist(static_cast<size_t>(m_) * m_, kInf), next(static_cast<size_t>(m_) * m_, -1) {
    for (int i = 0; i < m; ++i) {
      dist[idx(i, i)] = 0.0;
      next[idx(i, i)] = i;
    }
  }
  size_t idx(int a, int b) const { return static_cast<size_t>(a) * m + b; }
  void set_edge(int a, int b, double wgt) {
    dist[idx(a, b)] = dist[idx(b, a)] = wgt;
    next[idx(a, b)] = b;
    next[idx(b, a)] = a;
  }
  void run() {
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a) {
        const double dac = dist[idx(a, c)];
        if (dac == kInf) continue;
        for (int b = 0; b < m; ++b) {
          const double cand = dac + dist[idx(c, b)];
          if (cand < dist[idx(a, b)]) {
            dist[idx(a, b)] = cand;
            next[idx(a, b)] = next[idx(a, c)];
          }
        }
      }
  }
  std::vector<int> path(int a, int b) const {
    std::vector<int> p{a};
    while (a != b) {
      a = next[idx(a, b)];
      p.push_back(a);
    }
    return p;
  }
};

std::uint64_t tri_key(int a, int b, int c) {
  return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) | static_cast<std::uint64_t>(c);
}

LpSolution solve_once(const MetricLpModel& model, const SolveOptions& opt) {
  const int nv = model.num_vars();
  const int m = model.num_points();
  LpSolution sol;

  // structural index of each model variable (-1 if pinned or unused)
  std::vector<int> col(nv, -1);
  std::vector<int> var_of_col;
  auto use = [&](int v) {
    if (model.fixed[v] || col[v] >= 0) return;
    col[v] = static_cast<int>(var_of_col.size());
    var_of_col.push_back(v);
  };
  for (int j = 2; j <= model.n(); ++j) use(model.t_var(j));
  use(model.y_var());
  for (const auto* rows : {&model.speed_rows, &model.objective_rows})
    for (const auto& row : *rows)
      for (const auto& t : row.terms) use(t.var);

  // edges of the support graph: free distances used by rows, plus every pinned distance
  std::vector<int> edge_vars;
  for (int v = model.first_dist_var(); v < nv; ++v)
    if (col[v] >= 0 || model.fixed[v]) edge_vars.push_back(v);

  std::vector<double> cost(var_of_col.size(), 0.0);
  cost[col[model.y_var()]] = 1.0;
  DualSimplex lp(std::move(cost));

  auto add_model_row = [&](const LpRow& row) {
    DualSimplex::Terms terms;
    double rhs = row.rhs;
    for (const auto& t : row.terms) {
      if (model.fixed[t.var])
        rhs -= t.coef * *model.fixed[t.var];
      else
        terms.emplace_back(col[t.var], t.coef);
    }
    if (terms.empty()) return -1;
    return lp.add_row(terms, rhs);
  };
  std::vector<int> speed_row_id, obj_row_id;
  for (const auto& row : model.speed_rows) speed_row_id.push_back(add_model_row(row));
  for (const auto& row : model.objective_rows) obj_row_id.push_back(add_model_row(row));

  DualSimplex::Options so;
  so.max_iterations = opt.max_iterations;
  so.bland = opt.bland;

  auto edge_value = [&](int v, const std::vector<double>& x) {
    return model.fixed[v] ? *model.fixed[v] : std::max(x[col[v]], 0.0);
  };

  std::vector<Cut> cuts;
  std::set<std::vector<int>> seen;
  DualSimplex::Status st = DualSimplex::Status::optimal;
  for (int round = 0; round < opt.max_rounds; ++round) {
    st = lp.solve(so);
    sol.rounds = round + 1;
    if (st != DualSimplex::Status::optimal) break;
    const auto& x = lp.primal();
    ShortestPaths sp(m);
    for (int v : edge_vars) {
      auto [a, b] = model.pair_of(v);
      sp.set_edge(a, b, edge_value(v, x));
    }
    sp.run();
    std::vector<std::pair<double, int>> violated;
    for (int v : edge_vars) {
      auto [a, b] = model.pair_of(v);
      const double gap = edge_value(v, x) - sp.dist[sp.idx(a, b)];
      if (gap > opt.separation_tol) violated.emplace_back(-gap, v);
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end());
    int added = 0;
    for (const auto& [neg_gap, v] : violated) {
      auto [a, b] = model.pair_of(v);
      std::vector<int> path = sp.path(a, b);
      if (path.size() < 3 || !seen.insert(path).second) continue;
      DualSimplex::Terms terms;
      double rhs = 0.0;
      bool any_free = false;
      for (size_t i = 0; i + 1 < path.size(); ++i) {
        const int e = model.d_var(path[i], path[i + 1]);
        if (model.fixed[e]) {
          rhs -= *model.fixed[e];
        } else {
          terms.emplace_back(col[e], 1.0);
          any_free = true;
        }
      }
      if (model.fixed[v]) {
        rhs += *model.fixed[v];
      } else {
        terms.emplace_back(col[v], -1.0);
        any_free = true;
      }
      if (!any_free) continue;
      cuts.push_back({lp.add_row(terms, rhs), std::move(path)});
      ++added;
    }
    if (added == 0) break;
  }
  sol.iterations = lp.iterations();
  sol.cuts = static_cast<int>(cuts.size());
  if (st == DualSimplex::Status::infeasible) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  if (st != DualSimplex::Status::optimal) {
    sol.status = LpStatus::numeric_failure;
    return sol;
  }
  lp.polish();
  const auto& x = lp.primal();
  const auto& lam = lp.duals();

  // primal in full-model coordinates: shortest-path closure of the support graph
  std::vector<double> val(nv, 0.0);
  for (int v = 0; v < nv; ++v) {
    if (model.fixed[v])
      val[v] = *model.fixed[v];
    else if (col[v] >= 0)
      val[v] = x[col[v]];
  }
  ShortestPaths closure(m);
  for (int v : edge_vars) {
    auto [a, b] = model.pair_of(v);
    closure.set_edge(a, b, edge_value(v, x));
  }
  closure.run();
  sol.distances.assign(model.num_dist_vars(), 0.0);
  double pinf = 0.0;
  for (int v = model.first_dist_var(); v < nv; ++v) {
    auto [a, b] = model.pair_of(v);
    const double dv = closure.dist[closure.idx(a, b)];
    sol.distances[v - model.first_dist_var()] = dv;
    if (model.fixed[v]) pinf = std::max(pinf, std::abs(dv - *model.fixed[v]));
    val[v] = model.fixed[v] ? *model.fixed[v] : dv;
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      const double dab = val[model.d_var(a, b)];
      pinf = std::max(pinf, -dab);
      for (int c = 0; c < m; ++c) {
        if (c == a || c == b) continue;
        pinf = std::max(pinf, dab - val[model.d_var(a, c)] - val[model.d_var(c, b)]);
      }
    }
  auto row_violation = [&](const LpRow& row) {
    double act = 0.0;
    for (const auto& t : row.terms) act += t.coef * val[t.var];
    return row.rhs - act;
  };
  for (const auto* rows : {&model.speed_rows, &model.objective_rows})
    for (const auto& row : *rows) pinf = std::max(pinf, row_violation(row));

  // dual: row multipliers, cut multipliers spread over triangle chains
  std::vector<double> speed_dual(model.speed_rows.size(), 0.0);
  std::vector<double> obj_dual(model.objective_rows.size(), 0.0);
  for (size_t r = 0; r < speed_row_id.size(); ++r)
    if (speed_row_id[r] >= 0) speed_dual[r] = lam[speed_row_id[r]];
  for (size_t r = 0; r < obj_row_id.size(); ++r)
    if (obj_row_id[r] >= 0) obj_dual[r] = lam[obj_row_id[r]];
  std::unordered_map<std::uint64_t, double> tri_dual;
  for (const auto& cut : cuts) {
    const double l = lam[cut.row];
    if (l == 0.0) continue;
    const auto& p = cut.path;
    for (size_t i = 1; i + 1 < p.size(); ++i) tri_dual[tri_key(p[0], p[i + 1], p[i])] += l;
  }

  std::vector<double> resid(nv, 0.0);
  resid[model.y_var()] = 1.0;
  auto apply = [&](const LpRow& row, double l) {
    for (const auto& t : row.terms) resid[t.var] -= l * t.coef;
  };
  for (size_t r = 0; r < model.speed_rows.size(); ++r)
    if (speed_dual[r] != 0.0) apply(model.speed_rows[r], speed_dual[r]);
  for (size_t r = 0; r < model.objective_rows.size(); ++r)
    if (obj_dual[r] != 0.0) apply(model.objective_rows[r], obj_dual[r]);
  for (const auto& [key, l] : tri_dual) {
    const int a = static_cast<int>(key >> 42);
    const int b = static_cast<int>((key >> 21) & ((1u << 21) - 1));
    const int c = static_cast<int>(key & ((1u << 21) - 1));
    resid[model.d_var(a, c)] -= l;
    resid[model.d_var(c, b)] -= l;
    resid[model.d_var(a, b)] += l;
  }
  // bound multipliers on free times: chain of Queen speed rows back to the last pinned time
  for (int j = model.n(); j >= 2; --j) {
    const int tv = model.t_var(j);
    if (model.fixed[tv] || resid[tv] <= 0.0) continue;
    const double rho = resid[tv];
    int p = j - 1;
    while (!model.fixed[model.t_var(p)]) --p;
    for (int l = p; l < j; ++l) apply(model.speed_rows[static_cast<size_t>(l) * (model.k() + 1)], rho);
  }
  double dinf = 0.0;
  double dual_obj = 0.0;
  for (int v = 0; v < nv; ++v) {
    if (model.fixed[v]) {
      dual_obj += resid[v] * *model.fixed[v];
    } else if (model.is_dist_var(v)) {
      dinf = std::max(dinf, -resid[v]);  // multiplier of d >= 0
    } else {
      dinf = std::max(dinf, std::abs(resid[v]));
    }
  }
  for (double l : speed_dual) dinf = std::max(dinf, -l);
  for (double l : obj_dual) dinf = std::max(dinf, -l);
  for (const auto& [key, l] : tri_dual) dinf = std::max(dinf, -l);

  sol.value = val[model.y_var()];
  sol.times.assign(model.n() + 1, 0.0);
  for (int j = 0; j <= model.n(); ++j) sol.times[j] = val[model.t_var(j)];
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  sol.certificate_gap = std::abs(sol.value - dual_obj);
  const bool ok = pinf <= opt.certify_tol && dinf <= opt.certify_tol && sol.certificate_gap <= opt.certify_tol;
  sol.status = ok ? LpStatus::optimal : LpStatus::numeric_failure;
  return sol;
}

}  // namespace

LpSolution solve_certified(const MetricLpModel& m, const SolveOptions& opt) {
  LpSolution sol = solve_once(m, opt);
  if (sol.status == LpStatus::optimal || opt.bland) return sol;
  SolveOptions retry = opt;
  retry.bland = true;
  retry.max_iterations *= 4;
  LpSolution second = solve_once(m, retry);
  return second.status == LpStatus::optimal ? second : sol;
}

double config_lp_value(const Configuration& c, const PolygonGeometry& g, double w, bool presets) {
  const MetricLpModel m = build_lp(c, g, w, presets);
  const LpSolution sol = solve_certified(m);
  if (sol.status != LpStatus::optimal)
    throw NumericFailure("LP for " + to_text(c) + " not certified (" + to_string(sol.status) +
                         ", gap " + std::to_string(sol.certificate_gap) + ")");
  return sol.value;
}

namespace {

std::string fmt_num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_terms(std::ostream& os, const MetricLpModel& m, const std::vector<LpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const double a = std::abs(t.coef);
    os << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (a != 1.0) os << fmt_num(a) << ' ';
    os << m.var_name(t.var);
    first = false;
  }
}

}  // namespace

void write_lp_text(const MetricLpModel& m, std::ostream& os) {
  os << "\\ " << to_text(m.config) << " w=" << fmt_num(m.w) << "\n";
  os << "Minimize\n obj: y\nSubject To\n";
  auto emit = [&](const LpRow& row) {
    os << ' ' << row.name << ": ";
    write_terms(os, m, row.terms);
    os << " >= " << fmt_num(row.rhs) << '\n';
  };
  for (const auto& row : m.speed_rows) emit(row);
  for (const auto& row : m.objective_rows) emit(row);
  m.for_each_triangle([&](int a, int b, int c) { emit(m.triangle_row(a, b, c)); });
  os << "Bounds\n";
  for (int v = 0; v < m.num_vars(); ++v) {
    if (m.fixed[v])
      os << ' ' << m.var_name(v) << " = " << fmt_num(*m.fixed[v]) << '\n';
    else if (m.is_dist_var(v))
      os << ' ' << m.var_name(v) << " >= 0\n";
    else
      os << ' ' << m.var_name(v) << " free\n";
  }
  os << "End\n";
}

}  // namespace polyevac
