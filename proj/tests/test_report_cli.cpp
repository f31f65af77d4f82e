#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "cli.hpp"
#include "polyevac/errors.hpp"
#include "polyevac/reductions.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/report.hpp"
#include "polyevac/search.hpp"

using namespace polyevac;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "polyevac_tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p.string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

double field(const std::string& text, const std::string& key) {
  for (const auto& l : lines_of(text))
    if (l.rfind(key + " ", 0) == 0) return std::stod(l.substr(key.size() + 1));
  ADD_FAILURE() << "no " << key << " in\n" << text;
  return NAN;
}

}  // namespace

TEST(RunReport, PassMeansWithinTolerance) {
  RunReport r;
  r.add("a", 1.0, 1.0 + 1e-5, 1e-4, "x");
  r.add("b", 2.0, 2.1, 1e-4, "y");
  r.add("c", 3.0, 3.00005, 1e-4, "z");
  EXPECT_TRUE(r.checks[0].pass);
  EXPECT_FALSE(r.checks[1].pass);
  EXPECT_EQ(r.failures(), 1);
  EXPECT_FALSE(r.passed());
  for (const auto& c : r.checks) EXPECT_EQ(c.pass, c.recheck());
  EXPECT_NEAR(r.checks[1].delta(), -0.1, 1e-12);
}

TEST(RunReport, CsvRoundTripIsBitIdentical) {
  RunReport r;
  r.problem = "demo";
  r.add("lp n=3 k=1", std::sqrt(3.0), 1.7320508075688772, 1e-8, "polygon lower bound table n=3 k=1");
  r.add("ub n=9 k=1", 3.2189123456789, 3.21891, 1e-4, "summary table, with comma");
  r.add("bad", 1.0 / 3.0, 0.3, 1e-4, "quote \" inside");
  std::stringstream ss;
  r.write_csv(ss);
  const auto back = RunReport::read_csv(ss);
  ASSERT_EQ(back.checks.size(), r.checks.size());
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    EXPECT_EQ(back.checks[i].id, r.checks[i].id);
    EXPECT_EQ(back.checks[i].citation, r.checks[i].citation);
    EXPECT_EQ(back.checks[i].computed, r.checks[i].computed);
    EXPECT_EQ(back.checks[i].reference, r.checks[i].reference);
    EXPECT_EQ(back.checks[i].tolerance, r.checks[i].tolerance);
    EXPECT_EQ(back.checks[i].recheck(), r.checks[i].pass);
  }
}

TEST(RunReport, JsonShape) {
  RunReport r;
  r.problem = "p";
  r.add("a", 1.0, 1.0, 1e-4, "c");
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["checks"].size(), 1u);
  EXPECT_EQ(j["checks"][0]["id"], "a");
  EXPECT_EQ(j["failures"], 0);
}

TEST(Reference, EveryEntryHasCitation) {
  for (const auto& r : lp_reference_rows()) EXPECT_FALSE(r.citation.empty());
  for (const auto& r : bound_reference()) EXPECT_FALSE(r.citation.empty());
  for (const auto& r : disk_reference()) EXPECT_FALSE(r.citation.empty());
  for (const auto& r : headline_constants()) EXPECT_FALSE(r.citation.empty());
  EXPECT_EQ(lp_reference_rows().size(), 35u);
  EXPECT_EQ(find_bound_reference(10, 3), nullptr);
  EXPECT_EQ(find_bound_reference(11, 3), nullptr);
  EXPECT_EQ(find_bound_reference(11, 4), nullptr);
  EXPECT_EQ(find_disk_reference(11, 4), nullptr);
}

// One listed LP value sits 2.6e-8 below its configuration's optimum (2 + sqrt(3)/2,
// confirmed with an independent solver), so exactly that check fails at 1e-8.
TEST(Verify, FastSuiteFailsOnlyTheKnownRow) {
  int seen = 0;
  VerifyOptions opt;
  opt.on_check = [&](const CheckResult&) { ++seen; };
  const auto r = verify(Suite::fast, opt);
  ASSERT_EQ(r.failures(), 1) << r.to_text();
  for (const auto& c : r.checks)
    if (!c.pass) {
      EXPECT_EQ(c.id, "lp n=6 k=1");
      EXPECT_NEAR(c.computed, 2 + std::sqrt(3.0) / 2, 1e-12);
    }
  EXPECT_EQ(seen, static_cast<int>(r.checks.size()));
  // LP rows, catalog plans, disk cells and the four best-per-k constants
  EXPECT_EQ(r.checks.size(), lp_reference_rows().size() + 32 + 23 + 4);
  for (const auto& c : r.checks) EXPECT_EQ(c.pass, c.recheck()) << c.id;
}

TEST(Verify, OverrideForcesFailure) {
  VerifyOptions opt;
  opt.reference_overrides["lp n=3 k=1"] = 1.8;
  RunReport r;
  check_lp_rows(r, opt);
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.id == "lp n=3 k=1"; });
  ASSERT_NE(it, r.checks.end());
  EXPECT_FALSE(it->pass);
  EXPECT_EQ(it->reference, 1.8);
}

TEST(Verify, EnumerationCases) {
  EXPECT_EQ(enumeration_cases().size(), 16u);
  for (auto [n, k] : enumeration_cases()) EXPECT_NE(find_lp_reference(n, k), nullptr) << n << "," << k;
}

TEST(Curve, Shapes) {
  const auto recs = w_sweep(4, 0.0, 0.2, 0.1, FilterOptions::all(), 1);
  const auto pts = curve_points(recs);
  ASSERT_EQ(pts.size(), 3u);
  std::ostringstream csv;
  write_curve(pts, CurveFormat::csv, csv);
  const auto ls = lines_of(csv.str());
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0], "w,value,kind,n");
  EXPECT_EQ(ls[1].substr(0, 2), "0,");

  std::ostringstream js;
  write_curve(pts, CurveFormat::json, js);
  const auto j = nlohmann::json::parse(js.str());
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j[2]["kind"], "lower");

  const auto single = curve_points(std::vector<BoundRecord>{recs[0]});
  const std::string path = temp_path("single.csv");
  emit_curve(single, CurveFormat::csv, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(lines_of(text).size(), 2u);

  EXPECT_THROW(emit_curve({}, CurveFormat::csv, temp_path("empty.csv")), InvalidInput);
  EXPECT_THROW(emit_curve(single, CurveFormat::csv, "/nonexistent-dir/x.csv"), Error);
}

TEST(Cli, LowerBoundTriangle) {
  const auto r = run({"lb", "--n", "3", "--k", "1", "--threads", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "lower_value"), 1.73205, 1e-5);
  EXPECT_NE(r.out.find("argmin n=3 k=1"), std::string::npos);
}

TEST(Cli, SingleConfiguration) {
  const auto r = run({"lb-config", "--config", "n=12 k=1 rho=1,2,3,12,4,11,10,5,9,8,6,7 s=1,0,0,1,0,1,1,0,1,1,0,1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("value 3.384865501"), std::string::npos) << r.out;
  EXPECT_NEAR(field(r.out, "value"), 3.3848655007, 1e-9);
}

TEST(Cli, BudgetGuard) {
  const auto r = run({"lb", "--n", "10", "--k", "4"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("budget exceeded"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"lb", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"lb", "--n", "3", "--k", "1", "--bogus"}).code, 2);
  EXPECT_EQ(run({"ub", "--n", "5", "--k", "1", "--method", "magic"}).code, 2);
  EXPECT_EQ(run({"disk-lb", "--k", "1", "--n-list", "6,x"}).code, 2);
  const auto r = run({"lb-config"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--config"), std::string::npos);
}

TEST(Cli, ErrorsFromTheLibrary) {
  EXPECT_EQ(run({"lb-config", "--config", "n=3 k=1 rho=1,2,2 s=0,0,0"}).code, 1);
  EXPECT_EQ(run({"ub", "--n", "20", "--k", "1", "--method", "catalog"}).code, 1);
}

TEST(Cli, VerifyForcedFailureExitsOne) {
  const auto r = run({"verify", "--reference-override", "disk n=6 k=1=9.0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, UpperBoundCatalog) {
  const std::string csv = temp_path("ub91.csv");
  const auto r = run({"ub", "--n", "9", "--k", "1", "--method", "catalog", "--out", csv});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "upper_value"), 3.21891, 1e-4);
  EXPECT_TRUE(fs::exists(csv));
}

TEST(Cli, DiskTablePrefix) {
  const auto r = run({"disk-lb", "--k", "1", "--n-list", "6,7,8,9"});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto ls = lines_of(r.out);
  ASSERT_EQ(ls.size(), 5u);
  const double expect[] = {4.38962, 4.40005, 4.3959, 4.56798};
  for (int i = 0; i < 4; ++i) {
    const auto cols = ls[i + 1];
    const double v = std::stod(cols.substr(0, cols.rfind(',')).substr(cols.substr(0, cols.rfind(',')).rfind(',') + 1));
    EXPECT_NEAR(v, expect[i], 1e-4) << cols;
  }
}

TEST(Cli, SweepAndExport) {
  const auto r = run({"wsweep", "--n", "4", "--from", "0", "--to", "0.2", "--step", "0.1", "--threads", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 1u + 3 + 3);  // lower and disk rows

  const std::string table = temp_path("table.csv");
  EXPECT_EQ(run({"export", "--what", "table", "--k", "2", "--out", table}).code, 0);
  std::ifstream in(table);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(lines_of(text).size(), 1u + 9);

  const std::string traj = temp_path("traj.txt");
  EXPECT_EQ(run({"export", "--what", "trajectory", "--n", "5", "--k", "2", "--format", "polyline", "--out", traj}).code,
            0);
  EXPECT_TRUE(fs::exists(traj));
}
