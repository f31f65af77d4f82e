#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "polyevac/dual_simplex.hpp"
#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"

using namespace polyevac;

namespace {

Configuration cfg(int n, int k, std::vector<int> rho, std::vector<int> s) { return {n, k, std::move(rho), std::move(s)}; }

Configuration random_config(std::mt19937& rng, int n, int k) {
  Configuration c{n, k, std::vector<int>(n), std::vector<int>(n)};
  for (int i = 0; i < n; ++i) c.rho[i] = i + 1;
  std::shuffle(c.rho.begin(), c.rho.end(), rng);
  std::uniform_int_distribution<int> agent(0, k);
  for (int& a : c.s) a = agent(rng);
  return c;
}

}  // namespace

TEST(DualSimplex, TwoVariableOptimumAndDuals) {
  DualSimplex lp({1.0, 1.0});
  lp.add_row({{0, 1.0}, {1, 2.0}}, 2.0);
  lp.add_row({{0, 3.0}, {1, 1.0}}, 3.0);
  ASSERT_EQ(lp.solve(), DualSimplex::Status::optimal);
  EXPECT_NEAR(lp.objective(), 1.4, 1e-12);
  EXPECT_NEAR(lp.primal()[0], 0.8, 1e-12);
  EXPECT_NEAR(lp.primal()[1], 0.6, 1e-12);
  EXPECT_NEAR(lp.duals()[0], 0.4, 1e-12);
  EXPECT_NEAR(lp.duals()[1], 0.2, 1e-12);
}

TEST(DualSimplex, WarmStartAfterAddingRow) {
  DualSimplex lp({1.0, 1.0});
  lp.add_row({{0, 1.0}, {1, 2.0}}, 2.0);
  ASSERT_EQ(lp.solve(), DualSimplex::Status::optimal);
  EXPECT_NEAR(lp.objective(), 1.0, 1e-12);
  lp.add_row({{0, 3.0}, {1, 1.0}}, 3.0);
  ASSERT_EQ(lp.solve(), DualSimplex::Status::optimal);
  EXPECT_NEAR(lp.objective(), 1.4, 1e-12);
  EXPECT_TRUE(lp.polish());
  EXPECT_LE(lp.primal_infeasibility(), 1e-12);
  EXPECT_LE(lp.dual_infeasibility(), 1e-12);
}

TEST(DualSimplex, DetectsInfeasibility) {
  DualSimplex lp({1.0});
  lp.add_row({{0, 1.0}}, 1.0);
  lp.add_row({{0, -1.0}}, 0.0);
  EXPECT_EQ(lp.solve(), DualSimplex::Status::infeasible);
}

TEST(LpModel, Counts) {
  const auto m31 = build_lp(cfg(3, 1, {1, 2, 3}, {1, 0, 1}), make_polygon(3), 0.0);
  EXPECT_EQ(m31.num_points(), 7);
  EXPECT_EQ(m31.num_dist_vars(), 21);
  const auto m52 = build_lp(cfg(5, 2, {1, 2, 3, 5, 4}, {1, 2, 0, 1, 2}), make_polygon(5), 0.0);
  EXPECT_EQ(m52.num_points(), 16);
  EXPECT_EQ(m52.num_dist_vars(), 120);
  EXPECT_EQ(m52.triangle_row_count(), 1680u);
  std::uint64_t rows = 0;
  m52.for_each_triangle([&](int, int, int) { ++rows; });
  EXPECT_EQ(rows, 1680u);
}

TEST(LpModel, PinnedValues) {
  const auto g = make_polygon(6);
  const auto c = cfg(6, 1, {1, 2, 6, 3, 5, 4}, {1, 0, 1, 0, 1, 0});
  const auto m = build_lp(c, g, 0.0);
  EXPECT_EQ(m.fixed[m.t_var(0)], -1.0);
  EXPECT_EQ(m.fixed[m.t_var(1)], 0.0);
  for (int a = 1; a <= 6; ++a) {
    EXPECT_EQ(m.fixed[m.d_var(0, m.assigned_point(a))], 1.0);
    for (int b = a + 1; b <= 6; ++b)
      EXPECT_NEAR(*m.fixed[m.d_var(m.assigned_point(a), m.assigned_point(b))], g.chord(c.rho[a - 1], c.rho[b - 1]),
                  1e-15);
  }
}

TEST(LpModel, SpeedAndObjectiveRows) {
  const auto m = build_lp(cfg(4, 2, {1, 2, 3, 4}, {1, 2, 0, 0}), make_polygon(4), 0.0);
  EXPECT_EQ(m.speed_rows.size(), 4u * 3u);
  ASSERT_EQ(m.objective_rows.size(), 4u);
  // at w=0 each objective row is y - t_j - d >= 0 with unit coefficients; no d when the Queen visits
  for (int j = 1; j <= 4; ++j) {
    const auto& row = m.objective_rows[j - 1];
    EXPECT_EQ(row.terms.size(), m.config.s[j - 1] == 0 ? 2u : 3u);
    for (const auto& t : row.terms) EXPECT_EQ(std::abs(t.coef), 1.0);
  }
}

TEST(LpModel, WeightedNeedsOneServant) {
  EXPECT_THROW(build_lp(cfg(4, 2, {1, 2, 3, 4}, {1, 2, 0, 0}), make_polygon(4), 0.5), UnsupportedWeightedK);
  EXPECT_NO_THROW(build_lp(cfg(4, 1, {1, 2, 3, 4}, {1, 1, 0, 0}), make_polygon(4), 0.5));
}

TEST(LpModel, WeightedAtZeroIsTheSameModel) {
  const auto c = cfg(5, 1, {1, 4, 5, 3, 2}, {1, 0, 1, 0, 0});
  const auto a = build_lp(c, make_polygon(5), 0.0);
  const auto b = build_lp(c, make_polygon(5), -0.0);
  ASSERT_EQ(a.objective_rows.size(), b.objective_rows.size());
  for (std::size_t r = 0; r < a.objective_rows.size(); ++r) {
    ASSERT_EQ(a.objective_rows[r].terms.size(), b.objective_rows[r].terms.size());
    for (std::size_t t = 0; t < a.objective_rows[r].terms.size(); ++t) {
      EXPECT_EQ(a.objective_rows[r].terms[t].var, b.objective_rows[r].terms[t].var);
      EXPECT_EQ(a.objective_rows[r].terms[t].coef, b.objective_rows[r].terms[t].coef);
    }
  }
}

TEST(LpSolve, ReferenceValues) {
  EXPECT_NEAR(config_lp_value(cfg(3, 1, {1, 2, 3}, {1, 0, 1}), make_polygon(3), 0.0), std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(config_lp_value(cfg(5, 2, {1, 2, 3, 5, 4}, {1, 2, 0, 1, 2}), make_polygon(5), 0.0),
              std::sqrt((5 + std::sqrt(5.0)) / 2), 1e-10);
  EXPECT_NEAR(config_lp_value(cfg(12, 1, {1, 2, 3, 12, 4, 11, 10, 5, 9, 8, 6, 7}, {1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1}),
                              make_polygon(12), 0.0),
              3.3848655006886306, 1e-9);
  EXPECT_NEAR(config_lp_value(cfg(4, 1, {1, 2, 4, 3}, {1, 0, 1, 0}), make_polygon(4), 0.0), 2.121320343559643, 1e-10);
  EXPECT_NEAR(config_lp_value(cfg(9, 3, {1, 2, 4, 6, 5, 3, 9, 8, 7}, {1, 2, 3, 0, 3, 2, 1, 1, 0}), make_polygon(9), 0.0),
              1.8508331567966465, 1e-9);
}

TEST(LpSolve, PresetsAgreeOnMinimizer) {
  const auto c = cfg(5, 2, {1, 2, 3, 5, 4}, {1, 2, 0, 1, 2});
  EXPECT_EQ(distinct_agent_prefix(c), 3);
  EXPECT_NEAR(config_lp_value(c, make_polygon(5), 0.0, true), config_lp_value(c, make_polygon(5), 0.0, false), 1e-9);
}

TEST(LpSolve, CertificateAndMetricAxioms) {
  std::mt19937 rng(5);
  for (auto [n, k] : {std::pair{5, 1}, {6, 1}, {4, 2}, {5, 3}}) {
    const auto g = make_polygon(n);
    for (int t = 0; t < 6; ++t) {
      const auto c = random_config(rng, n, k);
      const auto m = build_lp(c, g, 0.0);
      const auto sol = solve_certified(m);
      ASSERT_EQ(sol.status, LpStatus::optimal) << to_text(c);
      EXPECT_LE(std::abs(sol.certificate_gap), 1e-9);
      const int P = m.num_points();
      for (int a = 0; a < P; ++a)
        for (int b = a + 1; b < P; ++b) {
          const double dab = sol.distance(m, a, b);
          EXPECT_GE(dab, -1e-9);
          for (int x = 0; x < P; ++x)
            if (x != a && x != b) EXPECT_LE(dab, sol.distance(m, a, x) + sol.distance(m, x, b) + 1e-9);
        }
      for (int v = 0; v < m.num_vars(); ++v) {
        if (!m.fixed[v] || !m.is_dist_var(v)) continue;
        const auto [a, b] = m.pair_of(v);
        EXPECT_NEAR(sol.distance(m, a, b), *m.fixed[v], 1e-9);
      }
      for (int j = 0; j < n; ++j) EXPECT_GE(sol.times[j + 1], sol.times[j] - 1e-9);
    }
  }
}

TEST(LpSolve, PresetsNeverLowerTheValue) {
  std::mt19937 rng(17);
  const auto g = make_polygon(6);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_config(rng, 6, 1);
    EXPECT_LE(config_lp_value(c, g, 0.0, false), config_lp_value(c, g, 0.0, true) + 1e-9) << to_text(c);
  }
}

TEST(LpSolve, WeightedValueMonotoneSanity) {
  // w=0 value through the weighted entry point equals the unweighted value
  const auto c = cfg(6, 1, {1, 2, 6, 3, 5, 4}, {1, 0, 1, 0, 1, 0});
  const auto g = make_polygon(6);
  EXPECT_EQ(config_lp_value(c, g, 0.0), solve_certified(build_lp(c, g, 0.0)).value);
}

TEST(LpText, Layout) {
  const auto m = build_lp(cfg(3, 1, {1, 2, 3}, {1, 0, 1}), make_polygon(3), 0.0);
  std::ostringstream os;
  write_lp_text(m, os);
  const std::string s = os.str();
  for (const char* part : {"Minimize", "Subject To", "Bounds", "End", "t0", " y", "d_0_0_0_1"})
    EXPECT_NE(s.find(part), std::string::npos) << part;
  std::size_t lines = 0;
  for (char ch : s) lines += ch == '\n';
  EXPECT_GT(lines, m.triangle_row_count());
}
