#include "polyevac/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/upperbounds.hpp"

namespace polyevac {

namespace {

using json = nlohmann::json;

std::string nk(int n, int k) { return "n=" + std::to_string(n) + " k=" + std::to_string(k); }

std::string fmt_full(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double reference_for(const VerifyOptions& opt, const std::string& id, double value) {
  const auto it = opt.reference_overrides.find(id);
  return it == opt.reference_overrides.end() ? value : it->second;
}

void add_checked(RunReport& r, const VerifyOptions& opt, const std::string& id, double computed, double reference,
                 double tol, const std::string& citation) {
  r.add(id, computed, reference_for(opt, id, reference), tol, citation);
  if (opt.on_check) opt.on_check(r.checks.back());
}

}  // namespace

bool CheckResult::recheck() const { return std::abs(computed - reference) <= tolerance; }

int RunReport::failures() const {
  int f = 0;
  for (const auto& c : checks) f += c.pass ? 0 : 1;
  return f;
}

void RunReport::add(std::string id, double computed, double reference, double tolerance, std::string citation) {
  CheckResult c{std::move(id), computed, reference, tolerance, std::move(citation), false};
  c.pass = c.recheck();
  checks.push_back(std::move(c));
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  os << problem << ": " << checks.size() << " checks, " << failures() << " failures, " << std::setprecision(3)
     << wall_time << " s\n";
  for (const auto& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << c.id << std::right << std::setprecision(10)
       << " computed=" << c.computed << " reference=" << c.reference << " delta=" << std::setprecision(3)
       << c.delta() << " tol=" << c.tolerance << "  [" << c.citation << "]\n";
  }
  return os.str();
}

std::string RunReport::to_json() const {
  json j;
  j["problem"] = problem;
  j["wall_time"] = wall_time;
  j["failures"] = failures();
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"id", c.id},
                           {"computed", c.computed},
                           {"reference", c.reference},
                           {"delta", c.delta()},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass},
                           {"citation", c.citation}});
  return j.dump(2);
}

void RunReport::write_csv(std::ostream& os) const {
  os << "id,computed,reference,tolerance,pass,citation\n";
  for (const auto& c : checks)
    os << quote(c.id) << ',' << fmt_full(c.computed) << ',' << fmt_full(c.reference) << ',' << fmt_full(c.tolerance)
       << ',' << (c.pass ? 1 : 0) << ',' << quote(c.citation) << '\n';
}

RunReport RunReport::read_csv(std::istream& is) {
  RunReport r;
  std::string line;
  if (!std::getline(is, line) || line.rfind("id,computed", 0) != 0) throw ParseError("missing report header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ParseError("bad report row: " + line);
    try {
      CheckResult c{f[0], std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), f[5], f[4] == "1"};
      r.checks.push_back(std::move(c));
    } catch (const std::logic_error&) {
      throw ParseError("bad number in report row: " + line);
    }
  }
  return r;
}

void check_lp_rows(RunReport& r, const VerifyOptions& opt) {
  for (const auto& row : lp_reference_rows()) {
    const PolygonGeometry g(row.n);
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = config_lp_value(row.config(), g, 0.0);
    } catch (const Error&) {
    }
    add_checked(r, opt, "lp " + nk(row.n, row.k), v, row.value, 1e-8, row.citation);
  }
}

void check_catalog(RunReport& r, const VerifyOptions& opt) {
  for (const auto& plan : catalog()) {
    const PolygonGeometry g(plan.n);
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = evaluate_trajectory(solve_plan(plan, g).trajectory, g, 0.0).worst_case;
    } catch (const Error&) {
    }
    const BoundReference* ref = find_bound_reference(plan.n, plan.k);
    if (!ref) continue;
    add_checked(r, opt, "ub " + nk(plan.n, plan.k), v, ref->upper, 1e-4, ref->citation);
  }
}

void check_disk_table(RunReport& r, const VerifyOptions& opt) {
  // polygon values are recomputed from the reference configurations, not copied
  std::map<int, std::vector<BoundRecord>> per_k;
  for (const auto& d : disk_reference()) {
    const LpReferenceRow* row = find_lp_reference(d.n, d.k);
    if (!row) continue;
    double raw = std::numeric_limits<double>::quiet_NaN();
    try {
      raw = config_lp_value(row->config(), PolygonGeometry(d.n), 0.0);
    } catch (const Error&) {
    }
    const double polygon = std::max(1.0, raw);
    double v = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(raw)) v = disk_lower_bound(d.n, d.k, polygon).disk_lower;
    add_checked(r, opt, "disk " + nk(d.n, d.k), v, d.value, 1e-4, d.citation);
    if (!std::isfinite(raw)) continue;
    BoundRecord rec;
    rec.n = d.n;
    rec.k = d.k;
    rec.lower_value = polygon;
    rec.raw_min = raw;
    rec.argmin_config = row->config();
    per_k[d.k].push_back(rec);
  }
  for (const auto& c : headline_constants()) {
    if (c.name.rfind("disk_lower_k", 0) != 0) continue;
    const int k = std::stoi(c.name.substr(12));
    double v = std::numeric_limits<double>::quiet_NaN();
    if (per_k.count(k)) v = best_disk_bound(per_k[k], k).disk_lower;
    add_checked(r, opt, "disk best k=" + std::to_string(k), v, c.value, 1e-4, c.citation);
  }
}

const std::vector<std::pair<int, int>>& enumeration_cases() {
  static const std::vector<std::pair<int, int>> cases = {
      {3, 1}, {4, 1}, {5, 1}, {6, 1}, {7, 1}, {3, 2}, {4, 2}, {5, 2}, {6, 2},
      {3, 3}, {4, 3}, {5, 3}, {3, 4}, {4, 4}, {5, 4}, {6, 4}};
  return cases;
}

void check_enumerations(RunReport& r, const VerifyOptions& opt) {
  for (const auto& [n, k] : enumeration_cases()) {
    SearchRequest req;
    req.n = n;
    req.k = k;
    req.threads = opt.threads;
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      v = min_over_configs(req).lower_value;
    } catch (const Error&) {
    }
    const BoundReference* ref = find_bound_reference(n, k);
    add_checked(r, opt, "enum " + nk(n, k), v, ref->lower, 1e-4, ref->citation);
  }
}

RunReport verify(Suite suite, const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunReport r;
  r.problem = suite == Suite::fast ? "verify fast" : "verify full";
  check_lp_rows(r, opt);
  check_catalog(r, opt);
  check_disk_table(r, opt);
  if (suite == Suite::full) check_enumerations(r, opt);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CurvePoint> curve_points(const std::vector<BoundRecord>& records, const std::string& kind) {
  std::vector<CurvePoint> out;
  for (const auto& r : records) out.push_back({r.w, r.lower_value, kind, r.n});
  return out;
}

std::vector<CurvePoint> curve_points(const std::vector<DiskBound>& bounds, const std::string& kind) {
  std::vector<CurvePoint> out;
  for (const auto& b : bounds) out.push_back({b.w, b.disk_lower, kind, b.n});
  return out;
}

void write_curve(const std::vector<CurvePoint>& points, CurveFormat format, std::ostream& os) {
  if (points.empty()) throw InvalidInput("empty curve");
  if (format == CurveFormat::csv) {
    os << "w,value,kind,n\n";
    for (const auto& p : points) os << fmt_full(p.w) << ',' << fmt_full(p.value) << ',' << p.kind << ',' << p.n << '\n';
    return;
  }
  json j = json::array();
  for (const auto& p : points) j.push_back({{"w", p.w}, {"value", p.value}, {"kind", p.kind}, {"n", p.n}});
  os << j.dump(2) << '\n';
}

void emit_curve(const std::vector<CurvePoint>& points, CurveFormat format, const std::string& path) {
  if (points.empty()) throw InvalidInput("empty curve");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_curve(points, format, out);
  if (!out) throw Error("write failed for " + path);
}

void write_bound_table(const std::vector<BoundRecord>& records, std::ostream& os) {
  os << "n,k,w,lower_value,raw_min,argmin,solved,pruned,total,wall_time\n";
  for (const auto& r : records)
    os << r.n << ',' << r.k << ',' << fmt_full(r.w) << ',' << fmt_full(r.lower_value) << ',' << fmt_full(r.raw_min)
       << ',' << quote(to_text(r.argmin_config)) << ',' << r.solved_count << ',' << r.pruned_count << ','
       << r.total_configs << ',' << fmt_full(r.wall_time) << '\n';
}

void write_disk_table(const std::vector<DiskBound>& bounds, std::ostream& os) {
  os << "n,k,w,polygon_lower,disk_lower,formula\n";
  for (const auto& b : bounds)
    os << b.n << ',' << b.k << ',' << fmt_full(b.w) << ',' << fmt_full(b.polygon_lower) << ','
       << fmt_full(b.disk_lower) << ',' << (b.formula == DiskFormula::priority ? "priority" : "weighted") << '\n';
}

}  // namespace polyevac
