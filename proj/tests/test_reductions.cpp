#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"
#include "polyevac/reductions.hpp"
#include "polyevac/reference.hpp"

using namespace polyevac;

namespace {

BoundRecord record(int n, int k, double lower) {
  BoundRecord r;
  r.n = n;
  r.k = k;
  r.raw_min = lower;
  r.lower_value = std::max(1.0, lower);
  return r;
}

}  // namespace

TEST(DiskLowerBound, Examples) {
  EXPECT_NEAR(disk_lower_bound(6, 1, 2.86602).disk_lower, 4.38962, 1e-5);
  EXPECT_NEAR(disk_lower_bound(12, 1, 3.38486).disk_lower, 4.64666, 1e-5);
  EXPECT_NEAR(disk_lower_bound(11, 2, 2.46291).disk_lower, 3.65332, 1e-4);
  const auto b = disk_lower_bound(6, 1, 2.86602);
  EXPECT_EQ(b.formula, DiskFormula::priority);
  EXPECT_EQ(b.polygon_lower, 2.86602);
  EXPECT_EQ(b.w, 0.0);
}

TEST(DiskLowerBound, Errors) {
  EXPECT_THROW(disk_lower_bound(6, 1, 0.95), InvalidInput);
  EXPECT_THROW(disk_lower_bound(2, 1, 2.0), InvalidInput);
  EXPECT_THROW(disk_lower_bound(6, 0, 2.0), InvalidInput);
  EXPECT_NO_THROW(disk_lower_bound(5, 4, 1.0));
}

TEST(WeightedDisk, Examples) {
  EXPECT_NEAR(wdisk_lower_bound(12, 0.0, 3.38486).disk_lower, 4.64666, 1e-5);
  EXPECT_NEAR(wdisk_lower_bound(7, 0.0, 2.95125).disk_lower, 4.40005, 1e-5);
  for (double x : {0.0, 1.5, 3.25}) {
    const auto b = wdisk_lower_bound(3, 1.0, x);
    EXPECT_DOUBLE_EQ(b.disk_lower, 1 + std::numbers::pi / 3 + x);
    EXPECT_EQ(b.formula, DiskFormula::weighted);
    EXPECT_EQ(b.k, 1);
  }
  EXPECT_THROW(wdisk_lower_bound(7, 1.2, 3.0), InvalidInput);
}

TEST(BestDiskBound, Examples) {
  std::vector<BoundRecord> k1;
  for (int n = 6; n <= 13; ++n) k1.push_back(record(n, 1, find_lp_reference(n, 1)->value));
  const auto b1 = best_disk_bound(k1, 1);
  EXPECT_EQ(b1.n, 12);
  EXPECT_NEAR(b1.disk_lower, 4.64666, 1e-5);

  std::vector<BoundRecord> k3;
  for (int n = 6; n <= 9; ++n) k3.push_back(record(n, 3, find_lp_reference(n, 3)->value));
  const auto b3 = best_disk_bound(k3, 3);
  EXPECT_EQ(b3.n, 6);
  EXPECT_NEAR(b3.disk_lower, 3.12782, 1e-5);

  const auto single = best_disk_bound({record(7, 2, 2.2)}, 2);
  EXPECT_DOUBLE_EQ(single.disk_lower, disk_lower_bound(7, 2, 2.2).disk_lower);
}

TEST(BestDiskBound, Errors) {
  EXPECT_THROW(best_disk_bound({}, 1), InvalidInput);
  EXPECT_THROW(best_disk_bound({record(6, 1, 2.8), record(6, 2, 2.1)}, 1), InvalidInput);
}

TEST(ReductionsProperty, FormulasAgreeAtOneServant) {
  for (int n = 3; n <= 40; ++n)
    for (double x : {1.0, 2.5, 3.38486})
      EXPECT_DOUBLE_EQ(disk_lower_bound(n, 1, x).disk_lower, wdisk_lower_bound(n, 0.0, x).disk_lower);
}

TEST(ReductionsProperty, Monotone) {
  for (int k = 1; k <= 4; ++k)
    for (int n = 3; n <= 30; ++n) {
      EXPECT_LT(disk_lower_bound(n, k, 2.0).disk_lower, disk_lower_bound(n, k, 2.0 + 1e-9).disk_lower);
      EXPECT_GT(disk_lower_bound(n, k, 2.0).disk_lower, disk_lower_bound(n + 1, k, 2.0).disk_lower);
    }
}

TEST(ReductionsProperty, ReproducesReferenceDiskBounds) {
  ASSERT_EQ(disk_reference().size(), 24u);
  int checked = 0;
  for (const auto& d : disk_reference()) {
    const auto* row = find_lp_reference(d.n, d.k);
    if (!row) {
      // the one cell without a polygon bound behind it
      EXPECT_EQ(d.n, 10);
      EXPECT_EQ(d.k, 3);
      continue;
    }
    const double polygon = std::max(1.0, config_lp_value(row->config(), make_polygon(d.n), 0.0));
    EXPECT_NEAR(disk_lower_bound(d.n, d.k, polygon).disk_lower, d.value, 1e-4) << d.n << "," << d.k;
    ++checked;
  }
  EXPECT_EQ(checked, 23);
}
