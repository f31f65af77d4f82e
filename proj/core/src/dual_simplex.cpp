#include "polyevac/dual_simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace polyevac {

DualSimplex::DualSimplex(std::vector<double> cost) : n_(static_cast<int>(cost.size())), c_(std::move(cost)) {
  d_ = c_;
  for (double& v : d_) v = std::max(v, 0.0);
  nonbasic_var_.resize(n_);
  where_.resize(n_);
  for (int j = 0; j < n_; ++j) {
    nonbasic_var_[j] = j;
    where_[j] = -(j + 1);
  }
  x_.assign(n_, 0.0);
}

int DualSimplex::add_row(const Terms& terms, double rhs) {
  const int r = num_rows();
  rows_.push_back({terms, rhs});
  tab_.resize(tab_.size() + n_, 0.0);
  double beta = -rhs;
  double* row = &tab_[static_cast<size_t>(r) * n_];
  for (const auto& [j, a] : terms) {
    const int w = where_[j];
    if (w < 0) {
      row[-w - 1] += a;
    } else {
      beta += a * beta_[w];
      const double* src = &tab_[static_cast<size_t>(w) * n_];
      for (int q = 0; q < n_; ++q) row[q] += a * src[q];
    }
  }
  beta_.push_back(beta);
  basic_var_.push_back(n_ + r);
  where_.push_back(r);
  y_.push_back(0.0);
  return r;
}

void DualSimplex::pivot(int r, int q) {
  double* pr = &tab_[static_cast<size_t>(r) * n_];
  const double a = pr[q];
  const double inv = 1.0 / a;
  beta_[r] = -beta_[r] * inv;
  for (int c = 0; c < n_; ++c) pr[c] = (c == q) ? inv : -pr[c] * inv;

  const int m = num_rows();
  for (int i = 0; i < m; ++i) {
    if (i == r) continue;
    double* pi = &tab_[static_cast<size_t>(i) * n_];
    const double f = pi[q];
    if (f == 0.0) continue;
    beta_[i] += f * beta_[r];
    for (int c = 0; c < n_; ++c) {
      if (c == q) continue;
      pi[c] += f * pr[c];
    }
    pi[q] = f * inv;
  }
  const double f = d_[q];
  if (f != 0.0) {
    for (int c = 0; c < n_; ++c) {
      if (c == q) continue;
      d_[c] += f * pr[c];
      if (d_[c] < 0.0 && d_[c] > -1e-13) d_[c] = 0.0;
    }
    d_[q] = f * inv;
  }

  const int leaving = basic_var_[r];
  const int entering = nonbasic_var_[q];
  basic_var_[r] = entering;
  nonbasic_var_[q] = leaving;
  where_[entering] = r;
  where_[leaving] = -(q + 1);
}

DualSimplex::Status DualSimplex::solve(const Options& opt) {
  bool bland = opt.bland;
  int stall = 0;
  double last_obj = -std::numeric_limits<double>::infinity();
  const int m = num_rows();
  for (int it = 0; it < opt.max_iterations; ++it) {
    int r = -1;
    double worst = -opt.primal_tol;
    for (int i = 0; i < m; ++i) {
      if (beta_[i] >= -opt.primal_tol) continue;
      if (bland) {
        if (r < 0 || basic_var_[i] < basic_var_[r]) r = i;
      } else if (beta_[i] < worst) {
        worst = beta_[i];
        r = i;
      }
    }
    if (r < 0) {
      extract();
      return Status::optimal;
    }
    const double* pr = &tab_[static_cast<size_t>(r) * n_];
    int q = -1;
    if (bland) {
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_; ++c) {
        if (pr[c] <= opt.pivot_tol) continue;
        const double ratio = std::max(d_[c], 0.0) / pr[c];
        if (ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && q >= 0 && nonbasic_var_[c] < nonbasic_var_[q])) {
          if (ratio < best - 1e-14) best = ratio;
          q = c;
        }
      }
    } else {
      // Harris two-pass ratio test
      double bound = std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_; ++c) {
        if (pr[c] <= opt.pivot_tol) continue;
        bound = std::min(bound, (std::max(d_[c], 0.0) + 1e-12) / pr[c]);
      }
      double best_piv = 0.0;
      for (int c = 0; c < n_; ++c) {
        if (pr[c] <= opt.pivot_tol) continue;
        if (std::max(d_[c], 0.0) / pr[c] <= bound && pr[c] > best_piv) {
          best_piv = pr[c];
          q = c;
        }
      }
    }
    if (q < 0) {
      extract();
      return Status::infeasible;
    }
    pivot(r, q);
    ++iterations_;

    double z = 0.0;
    for (int i = 0; i < m; ++i)
      if (basic_var_[i] < n_) z += c_[basic_var_[i]] * beta_[i];
    if (z <= last_obj + 1e-13) {
      if (++stall > opt.stall_limit) bland = true;
    } else {
      stall = 0;
      last_obj = z;
    }
  }
  extract();
  return Status::iteration_limit;
}

void DualSimplex::extract() {
  std::fill(x_.begin(), x_.end(), 0.0);
  for (int i = 0; i < num_rows(); ++i)
    if (basic_var_[i] < n_) x_[basic_var_[i]] = beta_[i];
  for (int i = 0; i < num_rows(); ++i) {
    const int w = where_[n_ + i];
    y_[i] = w < 0 ? std::max(d_[-w - 1], 0.0) : 0.0;
  }
}

double DualSimplex::objective() const {
  double z = 0.0;
  for (int j = 0; j < n_; ++j) z += c_[j] * x_[j];
  return z;
}

std::vector<double> DualSimplex::reduced_costs() const {
  std::vector<double> rc = c_;
  for (int i = 0; i < num_rows(); ++i) {
    if (y_[i] == 0.0) continue;
    for (const auto& [j, a] : rows_[i].terms) rc[j] -= a * y_[i];
  }
  return rc;
}

bool DualSimplex::polish() {
  std::vector<int> bs, tight;
  for (int i = 0; i < num_rows(); ++i)
    if (basic_var_[i] < n_) bs.push_back(basic_var_[i]);
  for (int i = 0; i < num_rows(); ++i)
    if (where_[n_ + i] < 0) tight.push_back(i);
  if (bs.size() != tight.size()) return false;
  const int k = static_cast<int>(bs.size());
  std::vector<int> col_of(n_, -1);
  for (int j = 0; j < k; ++j) col_of[bs[j]] = j;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd rhs(k), cb(k);
  for (int i = 0; i < k; ++i) {
    for (const auto& [j, a] : rows_[tight[i]].terms)
      if (col_of[j] >= 0) M(i, col_of[j]) += a;
    rhs(i) = rows_[tight[i]].rhs;
  }
  for (int j = 0; j < k; ++j) cb(j) = c_[bs[j]];

  std::vector<double> x(n_, 0.0), y(num_rows(), 0.0);
  if (k > 0) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const Eigen::VectorXd xb = lu.solve(rhs);
    const Eigen::VectorXd lam = lu.transpose().solve(cb);
    if (!xb.allFinite() || !lam.allFinite()) return false;
    if ((M * xb - rhs).lpNorm<Eigen::Infinity>() > 1e-9) return false;
    for (int j = 0; j < k; ++j) x[bs[j]] = xb(j);
    for (int i = 0; i < k; ++i) y[tight[i]] = lam(i);
  }
  const auto old_x = x_;
  const auto old_y = y_;
  const double before = std::max(primal_infeasibility(), dual_infeasibility());
  x_ = std::move(x);
  y_ = std::move(y);
  const double after = std::max(primal_infeasibility(), dual_infeasibility());
  if (after > std::max(before, 1e-9)) {
    x_ = old_x;
    y_ = old_y;
    return false;
  }
  return true;
}

double DualSimplex::primal_infeasibility() const {
  double worst = 0.0;
  for (double v : x_) worst = std::max(worst, -v);
  for (const auto& row : rows_) {
    double act = 0.0;
    for (const auto& [j, a] : row.terms) act += a * x_[j];
    worst = std::max(worst, row.rhs - act);
  }
  return worst;
}

double DualSimplex::dual_infeasibility() const {
  double worst = 0.0;
  for (double v : y_) worst = std::max(worst, -v);
  for (double v : reduced_costs()) worst = std::max(worst, -v);
  return worst;
}

}  // namespace polyevac
