#include "polyevac/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include "json.hpp"
#include <thread>

#include "polyevac/errors.hpp"
#include "polyevac/lp.hpp"

namespace polyevac {

namespace {

// Among tied optima: servant-first assignments (s lexicographically largest), then smallest rho.
bool tie_preferred(const Configuration& a, const Configuration& b) {
  if (a.s != b.s) return a.s > b.s;
  return a.rho < b.rho;
}

using json = nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct ChunkResult {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  double min_value = kInf;
  std::optional<Configuration> arg;
};

json header_json(const SearchRequest& r) {
  return json{{"n", r.n}, {"k", r.k}, {"w", r.w}, {"filters", r.filters.bits()}};
}

json chunk_json(const ChunkResult& c) {
  json j;
  j["chunk"] = {c.lo, c.hi};
  j["incumbent"] = std::isfinite(c.min_value) ? json(c.min_value) : json(nullptr);
  j["config"] = c.arg ? to_text(*c.arg) : std::string();
  return j;
}

struct Checkpoint {
  json header;
  std::vector<ChunkResult> chunks;
};

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint " + path);
  Checkpoint cp;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("checkpoint line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (lineno == 1) {
        if (!j.contains("n") || !j.contains("k") || !j.contains("w") || !j.contains("filters"))
          throw ParseError("checkpoint header lacks n/k/w/filters");
        cp.header = j;
        continue;
      }
      ChunkResult c;
      c.lo = j.at("chunk").at(0).get<std::uint64_t>();
      c.hi = j.at("chunk").at(1).get<std::uint64_t>();
      if (!j.at("incumbent").is_null()) c.min_value = j.at("incumbent").get<double>();
      const std::string text = j.at("config").get<std::string>();
      if (!text.empty()) c.arg = parse_configuration(text);
      cp.chunks.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw ParseError("checkpoint line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cp.header.is_null()) throw ParseError("checkpoint " + path + " is empty");
  return cp;
}

SearchRequest request_from_header(const json& h) {
  SearchRequest r;
  r.n = h.at("n").get<int>();
  r.k = h.at("k").get<int>();
  r.w = h.at("w").get<double>();
  r.filters = FilterOptions::from_bits(h.at("filters").get<int>());
  return r;
}

bool same_problem(const json& h, const SearchRequest& r) {
  return h.at("n").get<int>() == r.n && h.at("k").get<int>() == r.k && h.at("w").get<double>() == r.w &&
         h.at("filters").get<int>() == r.filters.bits();
}

void atomic_min(std::atomic<double>& a, double v) {
  double cur = a.load(std::memory_order_relaxed);
  while (v < cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

}  // namespace

int default_thread_count() {
  if (const char* env = std::getenv("SOLVER_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

BoundRecord min_over_configs(const SearchRequest& req) {
  if (req.n < 3) throw InvalidPolygon("n must be >= 3");
  if (req.k < 1) throw InvalidInput("k must be >= 1");
  if (req.w < 0.0 || req.w > 1.0) throw InvalidInput("w must lie in [0, 1]");
  if (req.w > 0.0 && req.k != 1) throw UnsupportedWeightedK("weighted search requires k = 1");
  const long double estimate = ConfigurationSpace::estimate_size(req.n, req.k, req.filters);
  if (estimate > req.budget)
    throw BudgetExceeded("(n=" + std::to_string(req.n) + ", k=" + std::to_string(req.k) + ") has about " +
                         std::to_string(static_cast<double>(estimate)) +
                         " configurations after filtering, above the budget of " +
                         std::to_string(static_cast<double>(req.budget)) +
                         "; verify single configurations with lb-config instead");

  const auto start = std::chrono::steady_clock::now();
  const PolygonGeometry g(req.n);
  const ConfigurationSpace space(req.n, req.k, req.filters);
  const std::uint64_t total = space.size();
  const std::uint64_t nchunks = (total + kChunkSize - 1) / kChunkSize;

  std::map<std::uint64_t, ChunkResult> done;
  std::ofstream out;
  if (req.checkpoint_path) {
    const auto& path = *req.checkpoint_path;
    if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
      Checkpoint cp = read_checkpoint(path);
      if (!same_problem(cp.header, req))
        throw CheckpointMismatch("checkpoint " + path + " is for " + cp.header.dump() + ", requested " +
                                 header_json(req).dump());
      for (auto& c : cp.chunks) done[c.lo] = std::move(c);
      out.open(path, std::ios::app);
    } else {
      out.open(path, std::ios::trunc);
      out << header_json(req).dump() << '\n';
      out.flush();
    }
    if (!out) throw Error("cannot write checkpoint " + path);
  }

  std::atomic<double> incumbent(naive_upper_bound(req.n, req.k, g));
  for (const auto& [lo, c] : done) atomic_min(incumbent, c.min_value);

  std::vector<std::uint64_t> todo;
  for (std::uint64_t c = 0; c < nchunks; ++c)
    if (!done.count(c * kChunkSize)) todo.push_back(c);
  if (req.max_chunks > 0 && todo.size() > req.max_chunks) todo.resize(req.max_chunks);

  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> solved{0}, pruned{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto worker = [&] {
    Configuration c;
    try {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= todo.size()) return;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure) return;
        }
        ChunkResult res;
        res.lo = todo[t] * kChunkSize;
        res.hi = std::min(total, res.lo + kChunkSize);
        std::uint64_t arg_index = 0;
        bool have = false;
        for (std::uint64_t i = res.lo; i < res.hi; ++i) {
          space.fill(i, c);
          if (req.prune && traversal_lower_bound(c, g) > incumbent.load(std::memory_order_relaxed) + 1e-9) {
            pruned.fetch_add(1, std::memory_order_relaxed);
            continue;
          }
          const MetricLpModel model = build_lp(c, g, req.w, req.presets);
          const LpSolution sol = solve_certified(model);
          if (sol.status != LpStatus::optimal)
            throw NumericFailure("LP for " + to_text(c) + " not certified after retry");
          solved.fetch_add(1, std::memory_order_relaxed);
          if (!have || sol.value < res.min_value - kTieWindow) {
            arg_index = i;
            have = true;
          } else if (sol.value <= res.min_value + kTieWindow && tie_preferred(c, space.at(arg_index))) {
            arg_index = i;
          }
          res.min_value = std::min(res.min_value, sol.value);
          atomic_min(incumbent, sol.value);
        }
        if (have) res.arg = space.at(arg_index);
        std::lock_guard<std::mutex> lock(mu);
        if (out.is_open()) {
          out << chunk_json(res).dump() << '\n';
          out.flush();
        }
        done[res.lo] = std::move(res);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!failure) failure = std::current_exception();
    }
  };

  const int nthreads = std::max(1, std::min<int>(req.threads, static_cast<int>(std::max<std::size_t>(1, todo.size()))));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BoundRecord rec;
  rec.n = req.n;
  rec.k = req.k;
  rec.w = req.w;
  rec.total_configs = total;
  rec.solved_count = solved.load();
  rec.pruned_count = pruned.load();
  rec.complete = done.size() == nchunks;
  double best = kInf;
  for (const auto& [lo, c] : done) best = std::min(best, c.min_value);
  if (!std::isfinite(best)) {
    if (rec.complete) throw NumericFailure("no configuration was solved");
    rec.raw_min = kInf;
    rec.lower_value = kInf;
  } else {
    const Configuration* arg = nullptr;
    for (const auto& [lo, c] : done)
      if (c.min_value <= best + kTieWindow && c.arg && (!arg || tie_preferred(*c.arg, *arg))) arg = &*c.arg;
    if (arg) rec.argmin_config = *arg;
    rec.raw_min = best;
    rec.lower_value = std::max(best, 1.0);
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

BoundRecord min_over_configs(int n, int k, double w, FilterOptions opts, int threads,
                             const std::optional<std::string>& checkpoint_path) {
  SearchRequest r;
  r.n = n;
  r.k = k;
  r.w = w;
  r.filters = opts;
  r.threads = threads;
  r.checkpoint_path = checkpoint_path;
  return min_over_configs(r);
}

BoundRecord resume(const std::string& checkpoint_path, int threads) {
  if (!std::filesystem::exists(checkpoint_path)) throw ParseError("no checkpoint at " + checkpoint_path);
  const Checkpoint cp = read_checkpoint(checkpoint_path);
  SearchRequest r;
  try {
    r = request_from_header(cp.header);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint header: ") + e.what());
  }
  r.threads = threads;
  r.checkpoint_path = checkpoint_path;
  r.budget = std::numeric_limits<long double>::infinity();
  return min_over_configs(r);
}

std::vector<double> w_grid(double w_start, double w_end, double w_step) {
  if (!(w_step > 0.0)) throw InvalidInput("w step must be positive");
  if (w_start < 0.0 || w_end > 1.0 || w_start > w_end) throw InvalidInput("need 0 <= w_start <= w_end <= 1");
  std::vector<double> grid;
  for (long m = 0;; ++m) {
    const double w = w_start + static_cast<double>(m) * w_step;
    if (w > w_end + 1e-9) break;
    grid.push_back(std::min(w, 1.0));
  }
  return grid;
}

std::vector<BoundRecord> w_sweep(int n, double w_start, double w_end, double w_step, FilterOptions opts,
                                 int threads) {
  std::vector<BoundRecord> out;
  for (double w : w_grid(w_start, w_end, w_step)) out.push_back(min_over_configs(n, 1, w, opts, threads));
  return out;
}

}  // namespace polyevac
