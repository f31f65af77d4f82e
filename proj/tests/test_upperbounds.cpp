#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/search.hpp"
#include "polyevac/upperbounds.hpp"

using namespace polyevac;

namespace {

double catalog_cost(int n, int k) {
  const QueenPlan* plan = find_plan(n, k);
  EXPECT_NE(plan, nullptr);
  const auto g = make_polygon(n);
  return evaluate_trajectory(solve_plan(*plan, g).trajectory, g).worst_case;
}

Configuration reference_config(int n, int k) {
  const auto* row = find_lp_reference(n, k);
  EXPECT_NE(row, nullptr);
  return row->config();
}

}  // namespace

TEST(Evaluate, TriangleCatalog) {
  const auto g = make_polygon(3);
  const auto sol = solve_plan(*find_plan(3, 1), g);
  const auto cb = evaluate_trajectory(sol.trajectory, g);
  EXPECT_NEAR(cb.worst_case, std::sqrt(3.0), 1e-9);
  EXPECT_EQ(cb.argmax_stages, (std::vector<int>{1, 3}));
  EXPECT_DOUBLE_EQ(cb.worst_case, *std::max_element(cb.stage_cost.begin(), cb.stage_cost.end()));
}

TEST(Evaluate, ClosedFormCosts) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(catalog_cost(6, 1), 2 + std::sqrt(3.0) / 2, 1e-9);
  EXPECT_NEAR(catalog_cost(4, 1), -1 + std::sqrt(2.0) + std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(catalog_cost(8, 4), 1 + std::sqrt(2 - std::sqrt(2.0)), 1e-9);
  EXPECT_NEAR(catalog_cost(7, 4), 2 * std::sin(pi / 7) + std::sin(2 * pi / 7), 1e-9);
}

// Queen alone, full speed along rho: cost is the time of the last visit,
// computed here by walking the vertices directly.
TEST(Evaluate, QueenOnlyMatchesDirectWalk) {
  std::mt19937 rng(7);
  for (int n = 3; n <= 8; ++n) {
    const auto g = make_polygon(n);
    std::vector<int> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = i + 1;
    std::shuffle(rho.begin() + 1, rho.end(), rng);
    const Configuration c{n, 1, rho, std::vector<int>(n, 0)};
    double clock = -1.0;
    double x = 0.0, y = 0.0;
    std::vector<Point2> queen;
    for (int v : rho) {
      const double a = 2 * std::numbers::pi * v / n;
      clock += std::hypot(std::cos(a) - x, std::sin(a) - y);
      x = std::cos(a);
      y = std::sin(a);
      queen.push_back({x, y});
    }
    const auto cb = evaluate_trajectory(trajectory_from_queen_path(c, g, queen), g);
    EXPECT_NEAR(cb.worst_case, clock, 1e-12);
    EXPECT_NEAR(cb.worst_case, cb.stage_cost.back(), 1e-12);
  }
}

TEST(Evaluate, QueenVisitsEverythingTriangle) {
  const auto g = make_polygon(3);
  const Configuration c{3, 1, {1, 2, 3}, {0, 0, 0}};
  const auto tr = trajectory_from_queen_path(c, g, {g.vertex(1), g.vertex(2), g.vertex(3)});
  const auto cb = evaluate_trajectory(tr, g);
  EXPECT_NEAR(cb.worst_case, 2 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(cb.argmax_stages, std::vector<int>{3});
}

TEST(Evaluate, SpeedViolationNamesTheStage) {
  const auto g = make_polygon(4);
  auto tr = solve_plan(*find_plan(4, 1), g).trajectory;
  tr.times[3] = tr.times[2];
  tr.times[4] = tr.times[2];
  try {
    evaluate_trajectory(tr, g);
    FAIL() << "expected InfeasibleTrajectory";
  } catch (const InfeasibleTrajectory& e) {
    EXPECT_EQ(e.stage(), 3);
  }
}

TEST(Evaluate, MissedVertex) {
  const auto g = make_polygon(3);
  auto tr = solve_plan(*find_plan(3, 1), g).trajectory;
  tr.positions[0][tr.config.s[0] == 0 ? 1 : 2].x += 1e-6;
  EXPECT_THROW(check_trajectory(tr, g), InfeasibleTrajectory);
}

TEST(Evaluate, WeightChecks) {
  const auto g = make_polygon(4);
  const auto tr = solve_plan(*find_plan(4, 1), g).trajectory;
  EXPECT_THROW(evaluate_trajectory(tr, g, -0.1), InvalidInput);
  EXPECT_THROW(evaluate_trajectory(tr, g, 1.5), InvalidInput);
  const auto g5 = make_polygon(5);
  EXPECT_THROW(evaluate_trajectory(solve_plan(*find_plan(5, 2), g5).trajectory, g5, 0.2), UnsupportedWeightedK);
}

TEST(Evaluate, WeightedCostFormula) {
  const auto g = make_polygon(5);
  const auto tr = solve_plan(*find_plan(5, 1), g).trajectory;
  const double w = 0.3;
  const auto cb = evaluate_trajectory(tr, g, w);
  for (int j = 1; j <= 5; ++j) {
    const Point2 v = g.vertex(tr.config.rho[j - 1]);
    const double expect =
        tr.times[j] + (distance(tr.positions[0][j], v) + w * distance(tr.positions[1][j], v)) / (1 + w);
    EXPECT_NEAR(cb.stage_cost[j - 1], expect, 1e-15);
  }
}

TEST(SolvePlan, NineOne) {
  const auto g = make_polygon(9);
  const auto sol = solve_plan(*find_plan(9, 1), g);
  // l1, l2, then the Queen's point on her last segment
  ASSERT_EQ(sol.params.size(), 3u);
  EXPECT_NEAR(sol.params[0], 0.06031, 5e-6);
  EXPECT_NEAR(sol.params[1], 0.32635, 5e-6);
  EXPECT_LE(sol.residual_norm, 1e-10);
  const auto cb = evaluate_trajectory(sol.trajectory, g);
  EXPECT_NEAR(cb.worst_case, 3.21891, 1e-4);
  EXPECT_NEAR(cb.stage_cost[4], cb.stage_cost[6], 1e-9);
}

TEST(SolvePlan, SixOneExact) {
  const auto sol = solve_plan(*find_plan(6, 1), make_polygon(6));
  ASSERT_EQ(sol.params.size(), 2u);
  EXPECT_NEAR(sol.params[0], (1 - std::sqrt(3.0) / 2) / 2, 1e-9);
  EXPECT_NEAR(sol.params[1], 0.5, 1e-9);
}

TEST(SolvePlan, ElevenOne) {
  const auto g = make_polygon(11);
  const auto sol = solve_plan(*find_plan(11, 1), g);
  // free point (two coordinates), then l
  ASSERT_EQ(sol.params.size(), 3u);
  EXPECT_NEAR(sol.params[2], 0.26872, 5e-6);
  EXPECT_NEAR(evaluate_trajectory(sol.trajectory, g).worst_case, 3.35919, 1e-4);
}

TEST(SolvePlan, ValidationErrors) {
  QueenPlan p = *find_plan(9, 1);
  p.initial.push_back(0.5);
  EXPECT_THROW(validate_plan(p), InvalidInput);

  p = *find_plan(9, 1);
  p.initial[0] = 1.5;
  EXPECT_THROW(validate_plan(p), ParameterOutOfBox);

  p = *find_plan(9, 1);
  p.anchors.pop_back();
  EXPECT_THROW(validate_plan(p), InvalidInput);

  p = *find_plan(9, 1);
  p.k = 2;
  EXPECT_THROW(validate_plan(p), InvalidInput);

  p = *find_plan(3, 1);
  p.anchors[0] = Anchor::at(PointRef::Q(2));
  p.anchors[1] = Anchor::at(PointRef::Q(1));
  EXPECT_THROW(solve_plan(p, make_polygon(3)), InvalidInput);

  EXPECT_THROW(solve_plan(*find_plan(3, 1), make_polygon(4)), InvalidInput);
}

TEST(Catalog, Coverage) {
  int count = 0;
  for (int k = 1; k <= 4; ++k) {
    const int lo = k == 1 ? 3 : k == 2 ? 3 : k == 3 ? 4 : 5;
    const int hi = k == 1 ? 13 : k == 2 ? 11 : k == 3 ? 9 : 10;
    for (int n = lo; n <= hi; ++n, ++count) EXPECT_NE(find_plan(n, k), nullptr) << n << "," << k;
  }
  EXPECT_EQ(static_cast<int>(catalog().size()), count);
  EXPECT_EQ(find_plan(14, 1), nullptr);
}

TEST(CatalogProperty, EveryPlanFeasibleAndMatchesReference) {
  for (const auto& plan : catalog()) {
    SCOPED_TRACE("n=" + std::to_string(plan.n) + " k=" + std::to_string(plan.k));
    validate_plan(plan);
    const auto g = make_polygon(plan.n);
    const auto sol = solve_plan(plan, g);
    EXPECT_LE(sol.residual_norm, 1e-10);
    EXPECT_LE(trajectory_violation(sol.trajectory, g), 1e-9);
    const double cost = evaluate_trajectory(sol.trajectory, g).worst_case;
    const auto* ref = find_bound_reference(plan.n, plan.k);
    ASSERT_NE(ref, nullptr);
    EXPECT_NEAR(cost, ref->upper, 1e-4);
    if (const auto* row = find_lp_reference(plan.n, plan.k)) EXPECT_GE(cost, row->value - 1e-9);
  }
}

TEST(CatalogProperty, EqualCostResidualsHold) {
  for (const auto& plan : catalog()) {
    const auto g = make_polygon(plan.n);
    const auto cb = evaluate_trajectory(solve_plan(plan, g).trajectory, g);
    for (const auto& r : plan.residuals)
      if (r.kind == Residual::Kind::equal_cost)
        EXPECT_NEAR(cb.stage_cost[r.a - 1], cb.stage_cost[r.b - 1], 1e-9) << plan.n << "," << plan.k;
  }
}

TEST(CatalogProperty, WaitSemantics) {
  int holds = 0;
  for (const auto& plan : catalog()) {
    const auto g = make_polygon(plan.n);
    const auto tr = solve_plan(plan, g).trajectory;
    for (const auto& wa : plan.waits) {
      SCOPED_TRACE("n=" + std::to_string(plan.n) + " k=" + std::to_string(plan.k) + " stage " +
                   std::to_string(wa.stage));
      const double dt = tr.times[wa.stage] - tr.times[wa.stage - 1];
      const double moved = distance(tr.positions[0][wa.stage], tr.positions[0][wa.stage - 1]);
      EXPECT_GT(dt, 1e-6);
      if (wa.kind == WaitAnnotation::Kind::hold) {
        ++holds;
        EXPECT_LE(moved, 1e-9);
      } else {
        EXPECT_LT(moved, dt - 1e-6);
      }
    }
  }
  EXPECT_GE(holds, 1);
}

TEST(Optimize, TwoServantsTriangle) {
  const auto c = reference_config(3, 2);
  const auto g = make_polygon(3);
  const auto tr = local_minimax_optimize(c, g, 0.0, std::nullopt);
  EXPECT_LE(evaluate_trajectory(tr, g).worst_case, 1.0 + 1e-6);
}

TEST(Optimize, TwelveOne) {
  const auto c = reference_config(12, 1);
  const auto g = make_polygon(12);
  const auto tr = local_minimax_optimize(c, g, 0.0, std::nullopt);
  EXPECT_LE(evaluate_trajectory(tr, g).worst_case, 3.38511 + 1e-3);
}

TEST(Optimize, SeedMustMatch) {
  const auto g = make_polygon(5);
  const auto seed = solve_plan(*find_plan(5, 1), g).trajectory;
  auto other = seed.config;
  std::swap(other.rho[1], other.rho[2]);
  EXPECT_THROW(local_minimax_optimize(other, g, 0.0, seed), InvalidInput);
  EXPECT_THROW(local_minimax_optimize(seed.config, g, 1.5, seed), InvalidInput);
}

TEST(OptimizeProperty, NeverWorseThanSeedNorBelowLp) {
  for (const auto& plan : catalog()) {
    if (plan.n > 9) continue;
    SCOPED_TRACE("n=" + std::to_string(plan.n) + " k=" + std::to_string(plan.k));
    const auto g = make_polygon(plan.n);
    const auto seed = solve_plan(plan, g).trajectory;
    const double seed_cost = evaluate_trajectory(seed, g).worst_case;
    OptimizeOptions opt;
    opt.restarts = 0;
    const auto tr = local_minimax_optimize(plan.config, g, 0.0, seed, opt);
    const double cost = evaluate_trajectory(tr, g).worst_case;
    EXPECT_LE(cost, seed_cost);
    EXPECT_GE(cost, config_lp_value(plan.config, g, 0.0) - 1e-7);
  }
}

TEST(OptimizeProperty, RandomConfigsRespectLp) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + trial % 3;
    const int k = 1 + trial % 2;
    std::vector<int> rho(n), s(n);
    for (int i = 0; i < n; ++i) rho[i] = i + 1;
    std::shuffle(rho.begin() + 1, rho.end(), rng);
    std::uniform_int_distribution<int> agent(0, k);
    for (int& x : s) x = agent(rng);
    const Configuration c{n, k, rho, s};
    const auto g = make_polygon(n);
    const auto tr = local_minimax_optimize(c, g, 0.0, std::nullopt);
    EXPECT_LE(trajectory_violation(tr, g), 1e-9);
    EXPECT_GE(evaluate_trajectory(tr, g).worst_case, config_lp_value(c, g, 0.0) - 1e-7) << to_text(c);
  }
}

TEST(OptimizeProperty, WeightedAboveWeightedLp) {
  const auto g = make_polygon(6);
  const auto c = reference_config(6, 1);
  for (double w : {0.1, 0.5, 1.0}) {
    const auto tr = local_minimax_optimize(c, g, w, std::nullopt);
    EXPECT_GE(evaluate_trajectory(tr, g, w).worst_case, config_lp_value(c, g, w) - 1e-7);
  }
}

TEST(UbFor, CatalogExamples) {
  EXPECT_NEAR(ub_for(9, 1, 0.0, UbMethod::catalog).first, 3.21891, 1e-4);
  EXPECT_NEAR(ub_for(10, 4, 0.0, UbMethod::catalog).first, 1.65153, 1e-4);
  EXPECT_THROW(ub_for(9, 1, 0.1, UbMethod::catalog), InvalidInput);
  EXPECT_THROW(ub_for(20, 1, 0.0, UbMethod::catalog), NoKnownConfiguration);
  EXPECT_THROW(ub_for(20, 3, 0.0, UbMethod::optimize), NoKnownConfiguration);
}

TEST(UbFor, WeightedTwelveAboveLowerBound) {
  const double w = 0.02;
  const auto [cost, tr] = ub_for(12, 1, w, UbMethod::optimize);
  const auto g = make_polygon(12);
  EXPECT_NEAR(evaluate_trajectory(tr, g, w).worst_case, cost, 1e-12);
  EXPECT_EQ(tr.config, *weighted_fixed_configuration(12));
  EXPECT_GE(cost, config_lp_value(tr.config, g, w) - 1e-7);
}

TEST(UbFor, KnownConfigurations) {
  EXPECT_EQ(known_configuration(11, 1, 0.3), weighted_fixed_configuration(11));
  EXPECT_EQ(known_configuration(7, 2, 0.0), reference_config(7, 2));
  EXPECT_FALSE(known_configuration(14, 2, 0.0).has_value());
}

TEST(Export, CsvRoundTrip) {
  const auto g = make_polygon(8);
  const auto tr = solve_plan(*find_plan(8, 3), g).trajectory;
  std::stringstream ss;
  write_trajectory_csv(tr, ss);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, "stage,t,x0,y0,x1,y1,x2,y2,x3,y3");
  const auto back = read_trajectory_csv(ss, tr.config);
  EXPECT_EQ(back.times, tr.times);
  for (int i = 0; i <= tr.k; ++i)
    for (int j = 0; j <= tr.n; ++j) {
      EXPECT_EQ(back.positions[i][j].x, tr.positions[i][j].x);
      EXPECT_EQ(back.positions[i][j].y, tr.positions[i][j].y);
    }
  std::stringstream bad("stage,t,x0,y0\n0,abc,0,0\n");
  EXPECT_THROW(read_trajectory_csv(bad, tr.config), ParseError);
}

TEST(Export, Polylines) {
  const auto g = make_polygon(4);
  const auto tr = solve_plan(*find_plan(4, 2), g).trajectory;
  std::stringstream ss;
  write_trajectory_polylines(tr, ss);
  std::string line;
  int rows = 0;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("agent,points", 0), 0u);
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 3);
}
