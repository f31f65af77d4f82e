#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "polyevac/geometry.hpp"

namespace polyevac {

// Visitation order rho and visiting agents s; stage j (1-based) visits
// vertex rho[j-1] by agent s[j-1], agent 0 being the Queen.
struct Configuration {
  int n = 0;
  int k = 0;
  std::vector<int> rho;
  std::vector<int> s;

  // Throws InvalidConfiguration when rho is not a permutation or s is out of range.
  void validate() const;

  // Lexicographic by rho, then s.
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);
  friend bool operator==(const Configuration& a, const Configuration& b) = default;
};

// `n=9 k=1 rho=1,2,9,... s=1,0,1,...`
std::string to_text(const Configuration& c);
Configuration parse_configuration(std::string_view text);

struct FilterOptions {
  bool fix_first_vertex = true;
  bool halve_second_vertex = true;
  bool queen_consecutive_rule = true;
  bool canonical_servant_labels = true;

  static FilterOptions all() { return {}; }
  static FilterOptions none() { return {false, false, false, false}; }
  // Bitmask used in checkpoint headers.
  int bits() const;
  static FilterOptions from_bits(int bits);
  friend bool operator==(const FilterOptions&, const FilterOptions&) = default;
};

// Random-access view of the filtered, lexicographically ordered stream of
// configurations. Index i maps to (R[i / |S|], S[i % |S|]) where R is the
// filtered list of visit orders and S the filtered list of agent sequences.
class ConfigurationSpace {
 public:
  ConfigurationSpace(int n, int k, FilterOptions opts);

  int n() const { return n_; }
  int k() const { return k_; }
  const FilterOptions& options() const { return opts_; }
  std::uint64_t size() const { return rho_count_ * s_count(); }
  std::uint64_t rho_count() const { return rho_count_; }
  std::uint64_t s_count() const { return seqs_.size() / static_cast<size_t>(n_); }

  Configuration at(std::uint64_t index) const;
  // Writes configuration `index` into c, reusing its storage.
  void fill(std::uint64_t index, Configuration& c) const;

  // Post-filter size computed without materializing anything.
  static long double estimate_size(int n, int k, FilterOptions opts);

 private:
  void fill_rho(std::uint64_t r, std::vector<int>& rho) const;

  int n_;
  int k_;
  FilterOptions opts_;
  std::vector<std::pair<int, int>> prefixes_;  // admissible (rho1, rho2)
  std::uint64_t tail_count_ = 1;               // (n-2)!
  std::uint64_t rho_count_ = 0;
  std::vector<std::uint8_t> seqs_;              // s_count * n
};

// Materialized stream; intended for small (n, k).
std::vector<Configuration> enumerate_configurations(int n, int k, FilterOptions opts);

Configuration canonicalize_servants(const Configuration& c);
Configuration mirror(const Configuration& c);
bool satisfies_queen_rule(const std::vector<int>& s);
bool has_canonical_labels(const std::vector<int>& s);

double traversal_lower_bound(const Configuration& c, const PolygonGeometry& g);
double naive_upper_bound(int n, int k, const PolygonGeometry& g);

}  // namespace polyevac
