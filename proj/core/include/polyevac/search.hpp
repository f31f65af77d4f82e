#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyevac/configspace.hpp"

namespace polyevac {

struct BoundRecord {
  int n = 0;
  int k = 0;
  double w = 0.0;
  double lower_value = 0.0;  // max(raw_min, 1)
  double raw_min = 0.0;
  Configuration argmin_config;
  std::uint64_t solved_count = 0;
  std::uint64_t pruned_count = 0;
  double wall_time = 0.0;  // seconds
  std::uint64_t total_configs = 0;
  bool complete = true;    // false when stopped early by max_chunks
};

struct SearchRequest {
  int n = 0;
  int k = 1;
  double w = 0.0;
  FilterOptions filters;
  int threads = 1;
  std::optional<std::string> checkpoint_path;
  bool prune = true;
  bool presets = false;
  long double budget = 1e9;        // refuse larger post-filter spaces
  std::uint64_t max_chunks = 0;    // stop after this many chunks in this call (0 = all)
};

inline constexpr std::uint64_t kChunkSize = 4096;
inline constexpr double kTieWindow = 1e-10;

BoundRecord min_over_configs(const SearchRequest& req);
BoundRecord min_over_configs(int n, int k, double w, FilterOptions opts, int threads,
                             const std::optional<std::string>& checkpoint_path = std::nullopt);

// Continues the run recorded in the checkpoint.
BoundRecord resume(const std::string& checkpoint_path, int threads = 1);

// w_start, w_start + step, ... up to w_end (inclusive within 1e-9).
std::vector<double> w_grid(double w_start, double w_end, double w_step);
std::vector<BoundRecord> w_sweep(int n, double w_start, double w_end, double w_step, FilterOptions opts,
                                 int threads = 1);

// Thread count from SOLVER_THREADS, or the hardware concurrency.
int default_thread_count();

}  // namespace polyevac
