#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polyevac/configspace.hpp"

namespace polyevac {

// Embedded published values. Every entry carries a citation naming its table.

// Minimizing configuration and its 15-digit LP value, one row per (n, k).
struct LpReferenceRow {
  int n = 0;
  int k = 0;
  double value = 0.0;
  std::vector<int> rho;
  std::vector<int> s;
  std::string citation;
  Configuration config() const { return Configuration{n, k, rho, s}; }
};

// Upper and lower polygon bounds: the summary grid plus the n=12,13 values.
// NA cells are absent from the list.
struct BoundReference {
  int n = 0;
  int k = 0;
  double upper = 0.0;
  double lower = 0.0;
  std::string citation;
};

struct DiskReference {
  int n = 0;
  int k = 0;
  double value = 0.0;
  std::string citation;
};

struct NamedConstant {
  std::string name;
  double value = 0.0;
  std::string citation;
};

const std::vector<LpReferenceRow>& lp_reference_rows();
const LpReferenceRow* find_lp_reference(int n, int k);

const std::vector<BoundReference>& bound_reference();
const BoundReference* find_bound_reference(int n, int k);

// The 26 populated disk lower bound cells.
const std::vector<DiskReference>& disk_reference();
const DiskReference* find_disk_reference(int n, int k);

// Best disk bounds per k and the prior-work disk bounds.
const std::vector<NamedConstant>& headline_constants();
std::optional<double> headline_constant(const std::string& name);

// Fixed configurations used for the weighted curves (n = 11, 12).
std::optional<Configuration> weighted_fixed_configuration(int n);

}  // namespace polyevac
