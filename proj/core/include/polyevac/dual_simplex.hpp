#pragma once

#include <utility>
#include <vector>

namespace polyevac {

// Dense dual simplex on a condensed tableau for
//   min c'x  s.t.  A x >= b,  x >= 0,   with c >= 0.
// The all-slack basis is dual feasible, so rows may be appended between
// solves and the next solve warm-starts from the current basis.
class DualSimplex {
 public:
  enum class Status { optimal, infeasible, iteration_limit, numeric_failure };
  using Terms = std::vector<std::pair<int, double>>;

  struct Options {
    int max_iterations = 20000;
    double primal_tol = 1e-11;
    double pivot_tol = 1e-9;
    int stall_limit = 50;  // degenerate pivots before switching to Bland's rule
    bool bland = false;
  };

  explicit DualSimplex(std::vector<double> cost);

  int num_structurals() const { return n_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  // Appends sum(terms) >= rhs and returns the row id.
  int add_row(const Terms& terms, double rhs);

  Status solve(const Options& opt);
  Status solve() { return solve(Options{}); }

  // Recomputes primal values and row duals from the final basis with an LU
  // factorization, which removes drift accumulated in the tableau.
  bool polish();

  double objective() const;
  const std::vector<double>& primal() const { return x_; }
  const std::vector<double>& duals() const { return y_; }
  // c_j - A_j' y for each structural.
  std::vector<double> reduced_costs() const;
  int iterations() const { return iterations_; }

  // Largest violation of A x >= b and x >= 0 at the current primal.
  double primal_infeasibility() const;
  // Largest violation of y >= 0 and c - A'y >= 0 at the current duals.
  double dual_infeasibility() const;

 private:
  void pivot(int r, int q);
  void extract();
  double& at(int r, int q) { return tab_[static_cast<size_t>(r) * n_ + q]; }
  double at(int r, int q) const { return tab_[static_cast<size_t>(r) * n_ + q]; }

  struct Row {
    Terms terms;
    double rhs;
  };

  int n_;
  std::vector<double> c_;
  std::vector<Row> rows_;

  // dictionary: basic[r] = beta[r] + sum_q tab[r][q] * nonbasic[q]
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<double> d_;         // reduced costs of nonbasic columns
  std::vector<int> basic_var_;    // per row
  std::vector<int> nonbasic_var_; // per column
  // var ids: structurals 0..n-1, slack of row i is n+i
  std::vector<int> where_;        // >= 0: row index, < 0: -(column+1)

  std::vector<double> x_;
  std::vector<double> y_;
  int iterations_ = 0;
};

}  // namespace polyevac
