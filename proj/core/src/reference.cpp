#include "polyevac/reference.hpp"

namespace polyevac {

namespace {

std::string cite(const char* table, int n, int k) {
  return std::string(table) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
}

std::vector<LpReferenceRow> build_lp_rows() {
  struct Raw {
    int n, k;
    double v;
    std::vector<int> rho, s;
  };
  const std::vector<Raw> raw = {
      {3, 1, 1.7320508075688772, {1, 2, 3}, {1, 0, 1}},
      {4, 1, 2.121320343559643, {1, 2, 4, 3}, {1, 0, 1, 0}},
      {5, 1, 2.7144122731725724, {1, 4, 5, 3, 2}, {1, 0, 1, 0, 0}},
      {6, 1, 2.8660253779249727, {1, 2, 6, 3, 5, 4}, {1, 0, 1, 0, 1, 0}},
      {7, 1, 2.95125017805582, {1, 2, 3, 7, 4, 6, 5}, {0, 1, 1, 0, 1, 0, 1}},
      {8, 1, 3.003207375377086, {1, 2, 3, 8, 4, 6, 5, 7}, {0, 1, 1, 0, 1, 0, 1, 0}},
      {9, 1, 3.218913730099321, {1, 2, 9, 3, 8, 4, 7, 5, 6}, {1, 0, 1, 0, 1, 0, 1, 0, 1}},
      {10, 1, 3.1871244937949434, {1, 2, 10, 3, 9, 4, 8, 6, 7, 5}, {1, 0, 1, 0, 1, 0, 1, 0, 1, 0}},
      {11, 1, 3.3557769107573536, {1, 2, 3, 11, 10, 4, 9, 5, 8, 6, 7}, {1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 0}},
      {12, 1, 3.3848655006886306, {1, 2, 3, 12, 4, 11, 10, 5, 9, 8, 6, 7}, {1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1}},
      {13, 1, 3.3636191025088142, {1, 2, 13, 3, 4, 12, 5, 11, 6, 7, 9, 8, 10},
       {0, 1, 0, 1, 1, 0, 1, 0, 1, 1, 0, 1, 0}},

      {3, 2, 0.8660254037844386, {1, 2, 3}, {1, 2, 0}},
      {4, 2, 1.7071067811865475, {1, 2, 3, 4}, {1, 2, 0, 0}},
      {5, 2, 1.9021130325903068, {1, 2, 3, 5, 4}, {1, 2, 0, 1, 2}},
      {6, 2, 1.9999999999999993, {1, 3, 5, 4, 2, 6}, {1, 2, 0, 2, 1, 0}},
      {7, 2, 2.0834826998207037, {1, 3, 7, 2, 6, 4, 5}, {1, 0, 2, 1, 2, 0, 2}},
      {8, 2, 2.2378405106469064, {1, 3, 2, 8, 4, 5, 7, 6}, {1, 2, 0, 1, 2, 2, 1, 0}},
      {9, 2, 2.3528883263148823, {1, 2, 5, 3, 9, 6, 4, 8, 7}, {1, 2, 0, 2, 1, 0, 2, 1, 1}},
      {10, 2, 2.3781074994199956, {1, 5, 2, 3, 10, 6, 9, 4, 7, 8}, {1, 0, 2, 2, 1, 0, 1, 2, 0, 1}},
      {11, 2, 2.4629185509183094, {1, 2, 9, 3, 11, 8, 10, 4, 6, 5, 7}, {1, 2, 0, 2, 1, 0, 1, 2, 0, 2, 0}},

      {3, 3, 0.8660254037844386, {1, 2, 3}, {1, 2, 0}},
      {4, 3, 1.0, {1, 2, 3, 4}, {1, 2, 3, 0}},
      {5, 3, 1.5388417685876266, {1, 2, 5, 4, 3}, {1, 2, 3, 0, 2}},
      {6, 3, 1.866025403784437, {1, 3, 5, 4, 6, 2}, {1, 2, 3, 2, 3, 1}},
      {7, 3, 1.8426953904169392, {1, 3, 6, 2, 4, 7, 5}, {1, 2, 3, 1, 2, 3, 2}},
      {8, 3, 1.9134171618254483, {1, 5, 3, 8, 4, 2, 7, 6}, {1, 2, 3, 1, 2, 3, 1, 0}},
      {9, 3, 1.8508331567966465, {1, 2, 4, 6, 5, 3, 9, 8, 7}, {1, 2, 3, 0, 3, 2, 1, 1, 0}},

      {3, 4, 0.8660254037844386, {1, 2, 3}, {1, 2, 0}},
      {4, 4, 1.0, {1, 2, 3, 4}, {1, 2, 3, 0}},
      {5, 4, 0.9510565162951532, {1, 2, 5, 4, 3}, {1, 2, 3, 4, 0}},
      {6, 4, 1.4999999999999991, {1, 4, 6, 5, 2, 3}, {1, 2, 3, 4, 1, 2}},
      {7, 4, 1.6495989607031372, {1, 3, 7, 2, 5, 4, 6}, {1, 2, 3, 4, 0, 2, 3}},
      {8, 4, 1.6892463972414653, {1, 3, 8, 6, 5, 2, 7, 4}, {1, 2, 3, 4, 4, 2, 3, 4}},
      {9, 4, 1.6688480396635432, {1, 3, 5, 9, 4, 2, 8, 6, 7}, {1, 2, 3, 4, 2, 1, 4, 3, 3}},
      {10, 4, 1.618033988749892, {1, 4, 5, 9, 3, 6, 10, 2, 7, 8}, {1, 2, 3, 4, 2, 3, 4, 1, 3, 0}},
  };
  std::vector<LpReferenceRow> out;
  for (const auto& r : raw) out.push_back({r.n, r.k, r.v, r.rho, r.s, cite("polygon lower bound table", r.n, r.k)});
  return out;
}

std::vector<BoundReference> build_bounds() {
  struct Raw {
    int n, k;
    double u, l;
  };
  const std::vector<Raw> raw = {
      {3, 1, 1.73205, 1.73205},  {4, 1, 2.14626, 2.12132},  {5, 1, 2.71441, 2.71441},  {6, 1, 2.86603, 2.86602},
      {7, 1, 2.97391, 2.95125},  {8, 1, 3.02649, 3.00320},  {9, 1, 3.21891, 3.21891},  {10, 1, 3.21549, 3.18712},
      {11, 1, 3.35919, 3.35577},
      {3, 2, 1.00000, 1.00000},  {4, 2, 1.70711, 1.70710},  {5, 2, 1.90211, 1.90211},  {6, 2, 2.00000, 2.00000},
      {7, 2, 2.14027, 2.08348},  {8, 2, 2.25951, 2.23784},  {9, 2, 2.37176, 2.35288},  {10, 2, 2.38956, 2.37810},
      {11, 2, 2.50211, 2.46291},
      {3, 3, 1.00000, 1.00000},  {4, 3, 1.00000, 1.00000},  {5, 3, 1.55017, 1.53884},  {6, 3, 2.00000, 1.86602},
      {7, 3, 1.86777, 1.84269},  {8, 3, 1.91342, 1.91341},  {9, 3, 1.91362, 1.85083},
      {3, 4, 1.00000, 1.00000},  {4, 4, 1.00000, 1.00000},  {5, 4, 1.00000, 1.00000},  {6, 4, 1.50000, 1.50000},
      {7, 4, 1.64960, 1.64959},  {8, 4, 1.76537, 1.68924},  {9, 4, 1.68404, 1.66884},  {10, 4, 1.65153, 1.61803},
  };
  std::vector<BoundReference> out;
  for (const auto& r : raw) out.push_back({r.n, r.k, r.u, r.l, cite("summary table", r.n, r.k)});
  out.push_back({12, 1, 3.38511, 3.38486, "summary bounds n=12 k=1"});
  out.push_back({13, 1, 3.36362, 3.36361, "summary bounds n=13 k=1"});
  return out;
}

std::vector<DiskReference> build_disk() {
  std::vector<DiskReference> out;
  auto row = [&](int k, int n0, std::initializer_list<double> vals) {
    int n = n0;
    for (double v : vals) {
      out.push_back({n, k, v, cite("disk bound table", n, k)});
      ++n;
    }
  };
  row(1, 6, {4.38962, 4.40005, 4.3959, 4.56798, 4.50128, 4.64138, 4.64666, 4.60528});
  row(2, 6, {3.34907, 3.38268, 3.49964, 3.5856, 3.58755, 3.65332});
  row(3, 6, {3.12782, 3.06709, 3.10977, 3.02537, 3.10814});
  row(4, 6, {2.70944, 2.82912, 2.84633, 2.80847, 2.74369});
  return out;
}

std::vector<NamedConstant> build_constants() {
  return {
      {"disk_lower_k1", 4.64666, "disk best bound k=1 (via n=12)"},
      {"disk_lower_k2", 3.65332, "disk best bound k=2 (via n=11)"},
      {"disk_lower_k3", 3.12782, "disk bound table best k=3 (via n=6)"},
      {"disk_lower_k4", 2.84633, "disk bound table best k=4 (via n=8)"},
      {"prior_upper_k1", 4.81854, "prior disk results table k=1 upper"},
      {"prior_lower_k1", 4.56798, "prior disk results table k=1 lower"},
      {"prior_upper_k2", 3.8327, "prior disk results table k=2 upper"},
      {"prior_lower_k2", 3.6307, "prior disk results table k=2 lower"},
      {"prior_upper_k3", 3.3738, "prior disk results table k=3 upper"},
      {"prior_lower_k3", 3.2017, "prior disk results table k=3 lower"},
      {"prior_upper_k4", 3.30129, "prior disk results table k=4 upper"},
      {"prior_lower_k4", 2.91322, "prior disk results table k=4 lower"},
  };
}

}  // namespace

const std::vector<LpReferenceRow>& lp_reference_rows() {
  static const auto rows = build_lp_rows();
  return rows;
}

const LpReferenceRow* find_lp_reference(int n, int k) {
  for (const auto& r : lp_reference_rows())
    if (r.n == n && r.k == k) return &r;
  return nullptr;
}

const std::vector<BoundReference>& bound_reference() {
  static const auto rows = build_bounds();
  return rows;
}

const BoundReference* find_bound_reference(int n, int k) {
  for (const auto& r : bound_reference())
    if (r.n == n && r.k == k) return &r;
  return nullptr;
}

const std::vector<DiskReference>& disk_reference() {
  static const auto rows = build_disk();
  return rows;
}

const DiskReference* find_disk_reference(int n, int k) {
  for (const auto& r : disk_reference())
    if (r.n == n && r.k == k) return &r;
  return nullptr;
}

const std::vector<NamedConstant>& headline_constants() {
  static const auto c = build_constants();
  return c;
}

std::optional<double> headline_constant(const std::string& name) {
  for (const auto& c : headline_constants())
    if (c.name == name) return c.value;
  return std::nullopt;
}

std::optional<Configuration> weighted_fixed_configuration(int n) {
  if (n == 11) return Configuration{11, 1, {1, 2, 3, 11, 10, 4, 9, 5, 8, 6, 7}, {1, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1}};
  if (n == 12)
    return Configuration{12, 1, {1, 2, 12, 3, 11, 4, 10, 5, 9, 6, 8, 7}, {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0}};
  return std::nullopt;
}

}  // namespace polyevac
