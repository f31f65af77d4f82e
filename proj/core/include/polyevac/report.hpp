#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "polyevac/reductions.hpp"
#include "polyevac/search.hpp"

namespace polyevac {

struct CheckResult {
  std::string id;  // e.g. "lp n=12 k=1"
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string citation;
  bool pass = false;

  double delta() const { return computed - reference; }
  // pass iff |computed - reference| <= tolerance
  bool recheck() const;
};

struct RunReport {
  std::string problem;
  std::vector<CheckResult> checks;
  double wall_time = 0.0;

  int failures() const;
  bool passed() const { return failures() == 0; }
  void add(std::string id, double computed, double reference, double tolerance, std::string citation);
  std::string to_text() const;
  std::string to_json() const;
  void write_csv(std::ostream& os) const;
  static RunReport read_csv(std::istream& is);
};

enum class Suite { fast, full };

struct VerifyOptions {
  int threads = 1;
  // Replaces the reference value of a check by id; used to exercise failure paths.
  std::map<std::string, double> reference_overrides;
  std::function<void(const CheckResult&)> on_check;
};

RunReport verify(Suite suite, const VerifyOptions& opt = {});

// Individual check groups, also used by the acceptance runner.
void check_lp_rows(RunReport& r, const VerifyOptions& opt);
void check_catalog(RunReport& r, const VerifyOptions& opt);
void check_disk_table(RunReport& r, const VerifyOptions& opt);
void check_enumerations(RunReport& r, const VerifyOptions& opt);

// (n, k) pairs enumerated by the full suite.
const std::vector<std::pair<int, int>>& enumeration_cases();

struct CurvePoint {
  double w = 0.0;
  double value = 0.0;
  std::string kind;  // lower, upper, disk
  int n = 0;
};

std::vector<CurvePoint> curve_points(const std::vector<BoundRecord>& records, const std::string& kind = "lower");
std::vector<CurvePoint> curve_points(const std::vector<DiskBound>& bounds, const std::string& kind = "disk");

enum class CurveFormat { csv, json };
void write_curve(const std::vector<CurvePoint>& points, CurveFormat format, std::ostream& os);
// Throws InvalidInput for an empty curve and Error for an unwritable path.
void emit_curve(const std::vector<CurvePoint>& points, CurveFormat format, const std::string& path);

// n,k,w,lower_value,raw_min,argmin,solved,pruned,total,wall_time
void write_bound_table(const std::vector<BoundRecord>& records, std::ostream& os);
// n,k,w,polygon_lower,disk_lower,formula
void write_disk_table(const std::vector<DiskBound>& bounds, std::ostream& os);

}  // namespace polyevac
