#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"
#include "polyevac/reductions.hpp"
#include "polyevac/reference.hpp"
#include "polyevac/report.hpp"
#include "polyevac/search.hpp"
#include "polyevac/upperbounds.hpp"

namespace polyevac::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Usage("bad integer list: " + text);
    }
  }
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

void print_record(const BoundRecord& r, std::ostream& out) {
  out << "lower_value " << num(r.lower_value) << '\n'
      << "raw_min " << num(r.raw_min) << '\n'
      << "argmin " << to_text(r.argmin_config) << '\n'
      << "solved " << r.solved_count << " pruned " << r.pruned_count << " total " << r.total_configs << '\n'
      << "wall_time " << num(r.wall_time) << '\n';
  if (!r.complete) out << "incomplete (stopped early; resume from the checkpoint)\n";
}

struct LbArgs {
  int n = 0, k = 1, threads = 0;
  double w = 0.0;
  std::string checkpoint;
  bool no_filters = false;
  double budget = 1e9;
};

int run_lb(const LbArgs& a, std::ostream& out) {
  SearchRequest req;
  req.n = a.n;
  req.k = a.k;
  req.w = a.w;
  req.threads = a.threads > 0 ? a.threads : default_thread_count();
  req.filters = a.no_filters ? FilterOptions::none() : FilterOptions::all();
  req.budget = a.budget;
  if (!a.checkpoint.empty()) req.checkpoint_path = a.checkpoint;
  print_record(min_over_configs(req), out);
  return kOk;
}

struct UbArgs {
  int n = 0, k = 1;
  double w = 0.0;
  std::string method = "catalog";
  std::string seed, config, out, polylines;
};

std::pair<double, Trajectory> compute_ub(const UbArgs& a) {
  if (a.method == "catalog") {
    if (!a.config.empty() || !a.seed.empty()) throw Usage("--config and --seed apply to --method optimize");
    return ub_for(a.n, a.k, a.w, UbMethod::catalog);
  }
  if (a.config.empty() && a.seed.empty()) return ub_for(a.n, a.k, a.w, UbMethod::optimize);
  Configuration c;
  if (!a.config.empty()) {
    c = parse_configuration(a.config);
  } else if (auto known = known_configuration(a.n, a.k, a.w)) {
    c = *known;
  } else {
    throw NoKnownConfiguration("no known configuration; pass --config");
  }
  const PolygonGeometry g(c.n);
  std::optional<Trajectory> seed;
  if (!a.seed.empty()) {
    std::ifstream in(a.seed);
    if (!in) throw Usage("cannot read seed " + a.seed);
    seed = read_trajectory_csv(in, c);
  }
  Trajectory tr = local_minimax_optimize(c, g, a.w, seed);
  const double v = evaluate_trajectory(tr, g, a.w).worst_case;
  return {v, std::move(tr)};
}

int run_ub(const UbArgs& a, std::ostream& out) {
  auto [v, tr] = compute_ub(a);
  const auto cb = evaluate_trajectory(tr, PolygonGeometry(tr.n), a.w);
  out << "upper_value " << num(v) << '\n' << "config " << to_text(tr.config) << '\n' << "argmax_stages";
  for (int j : cb.argmax_stages) out << ' ' << j;
  out << '\n';
  if (!a.out.empty()) {
    auto f = open_out(a.out);
    write_trajectory_csv(tr, f);
  }
  if (!a.polylines.empty()) {
    auto f = open_out(a.polylines);
    write_trajectory_polylines(tr, f);
  }
  return kOk;
}

std::vector<DiskBound> disk_table(int k, std::vector<int> ns) {
  if (ns.empty())
    for (const auto& row : lp_reference_rows())
      if (row.k == k && row.n >= 6) ns.push_back(row.n);
  std::vector<DiskBound> out;
  for (int n : ns) {
    const LpReferenceRow* row = find_lp_reference(n, k);
    if (!row) throw Usage("no reference configuration for n=" + std::to_string(n) + " k=" + std::to_string(k));
    const double v = config_lp_value(row->config(), PolygonGeometry(n), 0.0);
    out.push_back(disk_lower_bound(n, k, std::max(1.0, v)));
  }
  return out;
}

struct SweepArgs {
  int n = 0, threads = 0;
  double from = 0.0, to = 1.0, step = 0.1, ub_step = 0.0;
  std::string out, format = "csv";
};

std::vector<CurvePoint> sweep(const SweepArgs& a) {
  const int threads = a.threads > 0 ? a.threads : default_thread_count();
  const auto records = w_sweep(a.n, a.from, a.to, a.step, FilterOptions::all(), threads);
  auto points = curve_points(records, "lower");
  std::vector<DiskBound> disks;
  for (const auto& r : records) disks.push_back(wdisk_lower_bound(a.n, r.w, r.lower_value));
  const auto dp = curve_points(disks, "disk");
  points.insert(points.end(), dp.begin(), dp.end());
  if (a.ub_step > 0.0) {
    for (double w : w_grid(a.from, a.to, a.ub_step)) {
      const auto [v, tr] = ub_for(a.n, 1, w, UbMethod::optimize);
      points.push_back({w, v, "upper", a.n});
    }
  }
  return points;
}

CurveFormat curve_format(const std::string& f) {
  if (f == "csv") return CurveFormat::csv;
  if (f == "json") return CurveFormat::json;
  throw Usage("unknown format " + f);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"polygon priority evacuation bounds"};
  app.name("polyevac");
  app.require_subcommand(1);

  LbArgs lb;
  auto* lb_cmd = app.add_subcommand("lb", "lower bound by exhaustive search over configurations");
  lb_cmd->add_option("--n", lb.n, "polygon size")->required()->check(CLI::Range(3, 64));
  lb_cmd->add_option("--k", lb.k, "number of servants")->required()->check(CLI::Range(1, 16));
  lb_cmd->add_option("--w", lb.w, "servant weight (k=1 only)")->check(CLI::Range(0.0, 1.0));
  lb_cmd->add_option("--threads", lb.threads, "worker threads (default SOLVER_THREADS)");
  lb_cmd->add_option("--checkpoint", lb.checkpoint, "JSONL checkpoint; resumed when present");
  lb_cmd->add_flag("--no-filters", lb.no_filters, "disable symmetry filters");
  lb_cmd->add_option("--budget", lb.budget, "refuse searches larger than this many configurations");

  std::string config_text;
  double config_w = 0.0;
  auto* lbc_cmd = app.add_subcommand("lb-config", "LP value of one configuration");
  lbc_cmd->add_option("--config", config_text, "\"n=.. k=.. rho=.. s=..\"")->required();
  lbc_cmd->add_option("--w", config_w, "servant weight (k=1 only)")->check(CLI::Range(0.0, 1.0));

  UbArgs ub;
  auto* ub_cmd = app.add_subcommand("ub", "upper bound from a feasible trajectory");
  ub_cmd->add_option("--n", ub.n, "polygon size")->required()->check(CLI::Range(3, 64));
  ub_cmd->add_option("--k", ub.k, "number of servants")->required()->check(CLI::Range(1, 16));
  ub_cmd->add_option("--w", ub.w, "servant weight (k=1 only)")->check(CLI::Range(0.0, 1.0));
  ub_cmd->add_option("--method", ub.method, "catalog or optimize")
      ->required()
      ->check(CLI::IsMember({"catalog", "optimize"}));
  ub_cmd->add_option("--seed", ub.seed, "trajectory CSV to start the optimizer from");
  ub_cmd->add_option("--config", ub.config, "configuration to optimize");
  ub_cmd->add_option("--out", ub.out, "write the trajectory CSV here");
  ub_cmd->add_option("--polylines", ub.polylines, "write per-agent polylines here");

  int disk_k = 1;
  std::string disk_ns;
  auto* disk_cmd = app.add_subcommand("disk-lb", "disk lower bounds from polygon lower bounds");
  disk_cmd->add_option("--k", disk_k, "number of servants")->required()->check(CLI::Range(1, 4));
  disk_cmd->add_option("--n-list", disk_ns, "comma separated polygon sizes");

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("wsweep", "weighted lower bound curve for k=1");
  sw_cmd->add_option("--n", sw.n, "polygon size")->required()->check(CLI::Range(3, 64));
  sw_cmd->add_option("--from", sw.from, "first w")->required()->check(CLI::Range(0.0, 1.0));
  sw_cmd->add_option("--to", sw.to, "last w")->required()->check(CLI::Range(0.0, 1.0));
  sw_cmd->add_option("--step", sw.step, "w step")->required()->check(CLI::PositiveNumber);
  sw_cmd->add_option("--ub-step", sw.ub_step, "also compute optimizer upper bounds at this step");
  sw_cmd->add_option("--threads", sw.threads, "worker threads");
  sw_cmd->add_option("--out", sw.out, "write the curve here instead of stdout");
  sw_cmd->add_option("--format", sw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string suite = "fast", report_json, report_csv;
  std::vector<std::string> overrides;
  int verify_threads = 0;
  auto* ver_cmd = app.add_subcommand("verify", "check against the embedded reference tables");
  ver_cmd->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  ver_cmd->add_option("--threads", verify_threads, "worker threads for enumerations");
  ver_cmd->add_option("--json", report_json, "write the report as JSON");
  ver_cmd->add_option("--csv", report_csv, "write the report as CSV");
  ver_cmd->add_option("--reference-override", overrides, "ID=VALUE, replaces one reference value");

  std::string what, out_path, ex_format = "csv", ex_method = "catalog";
  int ex_n = 0, ex_k = 1;
  double ex_w = 0.0, ex_from = 0.0, ex_to = 1.0, ex_step = 0.1;
  auto* ex_cmd = app.add_subcommand("export", "write a trajectory, table or curve to a file");
  ex_cmd->add_option("--what", what, "trajectory, table or curve")
      ->required()
      ->check(CLI::IsMember({"trajectory", "table", "curve"}));
  ex_cmd->add_option("--out", out_path, "output path")->required();
  ex_cmd->add_option("--n", ex_n, "polygon size");
  ex_cmd->add_option("--k", ex_k, "number of servants");
  ex_cmd->add_option("--w", ex_w, "servant weight");
  ex_cmd->add_option("--method", ex_method, "catalog or optimize (trajectory)")
      ->check(CLI::IsMember({"catalog", "optimize"}));
  ex_cmd->add_option("--format", ex_format, "csv, json (curve) or polyline (trajectory)")
      ->check(CLI::IsMember({"csv", "json", "polyline"}));
  ex_cmd->add_option("--from", ex_from, "first w (curve)");
  ex_cmd->add_option("--to", ex_to, "last w (curve)");
  ex_cmd->add_option("--step", ex_step, "w step (curve)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  try {
    if (*lb_cmd) return run_lb(lb, out);

    if (*lbc_cmd) {
      const Configuration c = parse_configuration(config_text);
      const PolygonGeometry g(c.n);
      const LpSolution sol = solve_certified(build_lp(c, g, config_w));
      if (sol.status != LpStatus::optimal) {
        err << "LP not certified: " << to_string(sol.status) << '\n';
        return kFail;
      }
      out << "value " << num(sol.value) << '\n' << "certificate_gap " << num(sol.certificate_gap) << '\n';
      return kOk;
    }

    if (*ub_cmd) return run_ub(ub, out);

    if (*disk_cmd) {
      write_disk_table(disk_table(disk_k, disk_ns.empty() ? std::vector<int>{} : parse_int_list(disk_ns)), out);
      return kOk;
    }

    if (*sw_cmd) {
      if (sw.to < sw.from) throw Usage("--to must not be below --from");
      const auto points = sweep(sw);
      if (sw.out.empty()) {
        write_curve(points, curve_format(sw.format), out);
      } else {
        emit_curve(points, curve_format(sw.format), sw.out);
      }
      return kOk;
    }

    if (*ver_cmd) {
      VerifyOptions opt;
      opt.threads = verify_threads > 0 ? verify_threads : default_thread_count();
      for (const auto& o : overrides) {
        const auto eqpos = o.rfind('=');
        if (eqpos == std::string::npos) throw Usage("--reference-override needs ID=VALUE");
        try {
          opt.reference_overrides[o.substr(0, eqpos)] = std::stod(o.substr(eqpos + 1));
        } catch (const std::logic_error&) {
          throw Usage("bad override value in " + o);
        }
      }
      const RunReport r = verify(suite == "full" ? Suite::full : Suite::fast, opt);
      out << r.to_text();
      if (!report_json.empty()) open_out(report_json) << r.to_json() << '\n';
      if (!report_csv.empty()) {
        auto f = open_out(report_csv);
        r.write_csv(f);
      }
      return r.passed() ? kOk : kFail;
    }

    if (*ex_cmd) {
      if (what == "trajectory") {
        if (ex_n < 3) throw Usage("--n is required for trajectories");
        UbArgs a;
        a.n = ex_n;
        a.k = ex_k;
        a.w = ex_w;
        a.method = ex_method;
        const auto [v, tr] = compute_ub(a);
        auto f = open_out(out_path);
        if (ex_format == "polyline") {
          write_trajectory_polylines(tr, f);
        } else {
          write_trajectory_csv(tr, f);
        }
        out << "upper_value " << num(v) << '\n';
      } else if (what == "table") {
        std::vector<BoundRecord> recs;
        for (const auto& row : lp_reference_rows()) {
          if (row.k != ex_k) continue;
          BoundRecord r;
          r.n = row.n;
          r.k = row.k;
          r.argmin_config = row.config();
          r.raw_min = config_lp_value(r.argmin_config, PolygonGeometry(row.n), 0.0);
          r.lower_value = std::max(1.0, r.raw_min);
          r.solved_count = 1;
          r.total_configs = 1;
          recs.push_back(std::move(r));
        }
        auto f = open_out(out_path);
        write_bound_table(recs, f);
      } else {
        if (ex_n < 3) throw Usage("--n is required for curves");
        SweepArgs a;
        a.n = ex_n;
        a.from = ex_from;
        a.to = ex_to;
        a.step = ex_step;
        emit_curve(sweep(a), curve_format(ex_format == "json" ? "json" : "csv"), out_path);
      }
      out << "wrote " << out_path << '\n';
      return kOk;
    }
  } catch (const Usage& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\nraise --budget to run anyway\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"polyevac"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace polyevac::cli
