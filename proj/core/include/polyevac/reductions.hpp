#pragma once

#include <vector>

#include "polyevac/search.hpp"

namespace polyevac {

enum class DiskFormula { priority, weighted };

struct DiskBound {
  int n = 0;
  int k = 0;
  double w = 0.0;
  double polygon_lower = 0.0;
  double disk_lower = 0.0;
  DiskFormula formula = DiskFormula::priority;
};

// 1 + 2*pi/((k+1)*n) + polygon_lower. Throws InvalidInput if polygon_lower < 1.
DiskBound disk_lower_bound(int n, int k, double polygon_lower);
// 1 + pi/n + wobj, for k = 1.
DiskBound wdisk_lower_bound(int n, double w, double wobj);
// Priority bound per record, maximum returned. Records must share k.
DiskBound best_disk_bound(const std::vector<BoundRecord>& records, int k);

}  // namespace polyevac
