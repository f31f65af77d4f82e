#include "polyevac/reductions.hpp"

#include <numbers>

#include "polyevac/errors.hpp"

namespace polyevac {

DiskBound disk_lower_bound(int n, int k, double polygon_lower) {
  if (n < 3) throw InvalidInput("n must be at least 3");
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (!(polygon_lower >= 1.0)) throw InvalidInput("polygon lower bound must be clamped to at least 1");
  DiskBound b;
  b.n = n;
  b.k = k;
  b.polygon_lower = polygon_lower;
  b.disk_lower = 1.0 + 2.0 * std::numbers::pi / ((k + 1) * n) + polygon_lower;
  b.formula = DiskFormula::priority;
  return b;
}

DiskBound wdisk_lower_bound(int n, double w, double wobj) {
  if (n < 3) throw InvalidInput("n must be at least 3");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("w must lie in [0,1]");
  DiskBound b;
  b.n = n;
  b.k = 1;
  b.w = w;
  b.polygon_lower = wobj;
  b.disk_lower = 1.0 + std::numbers::pi / n + wobj;
  b.formula = DiskFormula::weighted;
  return b;
}

DiskBound best_disk_bound(const std::vector<BoundRecord>& records, int k) {
  if (records.empty()) throw InvalidInput("no records");
  DiskBound best;
  bool have = false;
  for (const auto& r : records) {
    if (r.k != k) throw InvalidInput("records mix values of k");
    const DiskBound b = disk_lower_bound(r.n, r.k, r.lower_value);
    if (!have || b.disk_lower > best.disk_lower) {
      best = b;
      have = true;
    }
  }
  return best;
}

}  // namespace polyevac
