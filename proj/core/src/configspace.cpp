#include "polyevac/configspace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "polyevac/errors.hpp"

namespace polyevac {

void Configuration::validate() const {
  if (n < 1 || k < 0) throw InvalidConfiguration("bad (n, k)");
  if (static_cast<int>(rho.size()) != n || static_cast<int>(s.size()) != n)
    throw InvalidConfiguration("rho and s must have length n");
  std::vector<char> seen(n + 1, 0);
  for (int v : rho) {
    if (v < 1 || v > n || seen[v]) throw InvalidConfiguration("rho is not a permutation of 1..n");
    seen[v] = 1;
  }
  for (int a : s)
    if (a < 0 || a > k) throw InvalidConfiguration("agent label outside 0..k");
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = a.n <=> b.n; c != 0) return c;
  if (auto c = a.k <=> b.k; c != 0) return c;
  if (auto c = a.rho <=> b.rho; c != 0) return c;
  return a.s <=> b.s;
}

namespace {

void append_list(std::ostringstream& os, const std::vector<int>& v) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
}

int parse_int(std::string_view tok) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("not an integer: '" + std::string(tok) + "'");
  return v;
}

std::vector<int> parse_list(std::string_view tok) {
  std::vector<int> out;
  size_t start = 0;
  while (start <= tok.size()) {
    size_t comma = tok.find(',', start);
    if (comma == std::string_view::npos) comma = tok.size();
    out.push_back(parse_int(tok.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

std::string_view expect_key(std::string_view tok, std::string_view key) {
  if (tok.size() <= key.size() + 1 || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    throw ParseError("expected '" + std::string(key) + "=...' but got '" + std::string(tok) + "'");
  return tok.substr(key.size() + 1);
}

std::uint64_t factorial(int m) {
  std::uint64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::vector<std::pair<int, int>> admissible_prefixes(int n, const FilterOptions& o) {
  std::vector<std::pair<int, int>> out;
  const int half = (n + 1) / 2;
  for (int a = 1; a <= n; ++a) {
    if (o.fix_first_vertex && a != 1) continue;
    for (int b = 1; b <= n; ++b) {
      if (b == a) continue;
      if (o.halve_second_vertex && b > half) continue;
      out.emplace_back(a, b);
    }
  }
  return out;
}

// Agent sequences in lexicographic order. `top` is the largest servant label
// seen so far; `locked` is set once two consecutive Queen stages occurred.
void grow_sequences(int n, int k, const FilterOptions& o, std::vector<std::uint8_t>& cur, int top,
                    bool prev_zero, bool locked, std::vector<std::uint8_t>& out) {
  const int pos = static_cast<int>(cur.size());
  if (pos == n) {
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int a = 0; a <= k; ++a) {
    if (o.queen_consecutive_rule && locked && a != 0) break;
    if (o.canonical_servant_labels && a > top + 1) break;
    cur.push_back(static_cast<std::uint8_t>(a));
    grow_sequences(n, k, o, cur, std::max(top, a), a == 0, locked || (prev_zero && a == 0), out);
    cur.pop_back();
  }
}

long double count_sequences(int n, int k, const FilterOptions& o) {
  // state: (top, prev_zero, locked) -> count
  std::map<std::tuple<int, bool, bool>, long double> cur{{{0, false, false}, 1.0L}};
  for (int pos = 0; pos < n; ++pos) {
    std::map<std::tuple<int, bool, bool>, long double> next;
    for (const auto& [st, cnt] : cur) {
      const auto [top, pz, locked] = st;
      for (int a = 0; a <= k; ++a) {
        if (o.queen_consecutive_rule && locked && a != 0) break;
        if (o.canonical_servant_labels && a > top + 1) break;
        const int ntop = o.canonical_servant_labels ? std::max(top, a) : 0;
        const bool nlock = o.queen_consecutive_rule && (locked || (pz && a == 0));
        const bool npz = o.queen_consecutive_rule && a == 0;
        next[{ntop, npz, nlock}] += cnt;
      }
    }
    cur.swap(next);
  }
  long double total = 0;
  for (const auto& [st, cnt] : cur) total += cnt;
  return total;
}

}  // namespace

std::string to_text(const Configuration& c) {
  std::ostringstream os;
  os << "n=" << c.n << " k=" << c.k << " rho=";
  append_list(os, c.rho);
  os << " s=";
  append_list(os, c.s);
  return os.str();
}

Configuration parse_configuration(std::string_view text) {
  std::vector<std::string_view> toks;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) toks.push_back(text.substr(i, j - i));
    i = j;
  }
  if (toks.size() != 4) throw ParseError("configuration needs 4 tokens: n= k= rho= s=");
  Configuration c;
  c.n = parse_int(expect_key(toks[0], "n"));
  c.k = parse_int(expect_key(toks[1], "k"));
  c.rho = parse_list(expect_key(toks[2], "rho"));
  c.s = parse_list(expect_key(toks[3], "s"));
  try {
    c.validate();
  } catch (const InvalidConfiguration& e) {
    throw ParseError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

int FilterOptions::bits() const {
  return (fix_first_vertex ? 1 : 0) | (halve_second_vertex ? 2 : 0) |
         (queen_consecutive_rule ? 4 : 0) | (canonical_servant_labels ? 8 : 0);
}

FilterOptions FilterOptions::from_bits(int b) {
  return {(b & 1) != 0, (b & 2) != 0, (b & 4) != 0, (b & 8) != 0};
}

ConfigurationSpace::ConfigurationSpace(int n, int k, FilterOptions opts) : n_(n), k_(k), opts_(opts) {
  if (n < 3) throw InvalidPolygon("configuration space needs n >= 3");
  if (k < 1) throw InvalidConfiguration("configuration space needs k >= 1");
  prefixes_ = admissible_prefixes(n, opts);
  tail_count_ = factorial(n - 2);
  rho_count_ = prefixes_.size() * tail_count_;
  std::vector<std::uint8_t> cur;
  cur.reserve(n);
  grow_sequences(n, k, opts, cur, 0, false, false, seqs_);
}

long double ConfigurationSpace::estimate_size(int n, int k, FilterOptions opts) {
  long double tail = 1;
  for (int i = 2; i <= n - 2; ++i) tail *= i;
  return static_cast<long double>(admissible_prefixes(n, opts).size()) * tail *
         count_sequences(n, k, opts);
}

void ConfigurationSpace::fill_rho(std::uint64_t r, std::vector<int>& rho) const {
  const auto [a, b] = prefixes_[r / tail_count_];
  std::uint64_t code = r % tail_count_;
  rho.resize(n_);
  rho[0] = a;
  rho[1] = b;
  int pool[64];
  int m = 0;
  for (int v = 1; v <= n_; ++v)
    if (v != a && v != b) pool[m++] = v;
  // Lehmer unranking over the sorted pool gives lexicographic order
  std::uint64_t f = tail_count_;
  for (int pos = 2; pos < n_; ++pos) {
    f /= static_cast<std::uint64_t>(m);
    const int idx = static_cast<int>(code / f);
    code %= f;
    rho[pos] = pool[idx];
    for (int t = idx; t + 1 < m; ++t) pool[t] = pool[t + 1];
    --m;
  }
}

void ConfigurationSpace::fill(std::uint64_t index, Configuration& c) const {
  if (index >= size()) throw IndexError("configuration index out of range");
  const std::uint64_t sc = s_count();
  c.n = n_;
  c.k = k_;
  fill_rho(index / sc, c.rho);
  const std::uint8_t* seq = &seqs_[(index % sc) * n_];
  c.s.assign(seq, seq + n_);
}

Configuration ConfigurationSpace::at(std::uint64_t index) const {
  Configuration c;
  fill(index, c);
  return c;
}

std::vector<Configuration> enumerate_configurations(int n, int k, FilterOptions opts) {
  ConfigurationSpace space(n, k, opts);
  std::vector<Configuration> out(space.size());
  for (std::uint64_t i = 0; i < space.size(); ++i) space.fill(i, out[i]);
  return out;
}

Configuration canonicalize_servants(const Configuration& c) {
  Configuration out = c;
  std::vector<int> relabel(c.k + 1, -1);
  relabel[0] = 0;
  int next = 1;
  for (int& a : out.s) {
    if (a == 0) continue;
    if (relabel[a] < 0) relabel[a] = next++;
    a = relabel[a];
  }
  return out;
}

Configuration mirror(const Configuration& c) {
  Configuration out = c;
  for (int& v : out.rho) v = (c.n + 1 - v) % c.n + 1;
  return out;
}

bool satisfies_queen_rule(const std::vector<int>& s) {
  bool locked = false;
  for (size_t j = 0; j < s.size(); ++j) {
    if (locked && s[j] != 0) return false;
    if (j > 0 && s[j] == 0 && s[j - 1] == 0) locked = true;
  }
  return true;
}

bool has_canonical_labels(const std::vector<int>& s) {
  int top = 0;
  for (int a : s) {
    if (a > top + 1) return false;
    top = std::max(top, a);
  }
  return true;
}

double traversal_lower_bound(const Configuration& c, const PolygonGeometry& g) {
  double best = 0.0;
  for (int agent = 0; agent <= c.k; ++agent) {
    double len = 0.0;
    int prev = 0;
    for (int j = 0; j < c.n; ++j) {
      if (c.s[j] != agent) continue;
      if (prev) len += g.chord(prev, c.rho[j]);
      prev = c.rho[j];
    }
    best = std::max(best, len);
  }
  return best;
}

double naive_upper_bound(int n, int k, const PolygonGeometry& g) {
  const double e = g.edge_length();
  const int a = (n + k - 1) / k;
  const int b = (n + k) / (k + 1);
  return std::min(1.0 + (a - 1) * e, 2.0 + (b - 1) * e);
}

}  // namespace polyevac
