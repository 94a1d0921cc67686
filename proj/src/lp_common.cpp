#include <algorithm>
#include <stdexcept>

#include "momrec/lp.hpp"
#include "momrec/lp_internal.hpp"

namespace momrec::lp {

void LpStandardForm::validate() const {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("lp: row count of a must match b");
  }
  if (a.cols() != c.size()) {
    throw std::invalid_argument("lp: column count of a must match c");
  }
  if (!is_free.empty() && static_cast<int>(is_free.size()) != cols()) {
    throw std::invalid_argument("lp: is_free size must match columns");
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw std::invalid_argument("lp: non-finite data");
  }
  if (cols() < 1) throw std::invalid_argument("lp: no variables");
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterationLimit:
      return "iteration-limit";
  }
  return "?";
}

RowCleanup remove_dependent_rows(const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& b) {
  RowCleanup out;
  const int m = static_cast<int>(a.rows());
  if (m == 0) {
    out.a = a;
    out.b = b;
    return out;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  const int rank = static_cast<int>(qr.rank());
  if (rank < m) {
    // Consistency: appending b as one more column must not raise the row
    // rank, otherwise some dropped equation contradicts the kept ones.
    Eigen::MatrixXd aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr2(aug.transpose());
    out.consistent = static_cast<int>(qr2.rank()) == rank;
  }
  out.kept.resize(rank);
  const auto& perm = qr.colsPermutation().indices();
  for (int i = 0; i < rank; ++i) out.kept[i] = perm[i];
  std::sort(out.kept.begin(), out.kept.end());
  out.a.resize(rank, a.cols());
  out.b.resize(rank);
  for (int i = 0; i < rank; ++i) {
    out.a.row(i) = a.row(out.kept[i]);
    out.b[i] = b[out.kept[i]];
  }
  return out;
}

FreeSplit split_free(const LpStandardForm& lp) {
  FreeSplit fs;
  fs.any = false;
  if (!lp.is_free.empty()) {
    for (auto v : lp.is_free) {
      if (v) {
        fs.any = true;
        break;
      }
    }
  }
  if (!fs.any) {
    fs.lp = lp;
    fs.lp.is_free.clear();
    return fs;
  }
  const int n = lp.cols();
  int extra = 0;
  fs.neg_col.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    if (lp.is_free[j]) fs.neg_col[j] = n + extra++;
  }
  fs.lp.a.resize(lp.rows(), n + extra);
  fs.lp.a.leftCols(n) = lp.a;
  fs.lp.c.resize(n + extra);
  fs.lp.c.head(n) = lp.c;
  for (int j = 0; j < n; ++j) {
    if (fs.neg_col[j] >= 0) {
      fs.lp.a.col(fs.neg_col[j]) = -lp.a.col(j);
      fs.lp.c[fs.neg_col[j]] = -lp.c[j];
    }
  }
  fs.lp.b = lp.b;
  return fs;
}

Eigen::VectorXd FreeSplit::merge(const Eigen::VectorXd& x_split,
                                 int n_orig) const {
  if (!any) return x_split;
  Eigen::VectorXd x(n_orig);
  for (int j = 0; j < n_orig; ++j) {
    x[j] = x_split[j];
    if (neg_col[j] >= 0) x[j] -= x_split[neg_col[j]];
  }
  return x;
}

void finish_solution(const LpStandardForm& lp, LpSolution& sol) {
  const Eigen::VectorXd& x = sol.primal;
  const Eigen::VectorXd& y = sol.dual;
  sol.objective = lp.c.dot(x);
  const double by = lp.b.dot(y);
  sol.primal_residual = (lp.a * x - lp.b).lpNorm<Eigen::Infinity>() /
                        (1.0 + lp.b.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd s = lp.c - lp.a.transpose() * y;
  // Free variables carry no sign constraint; their reduced cost must
  // itself vanish and is covered by the dual residual below.
  double dres = 0.0;
  for (int j = 0; j < lp.cols(); ++j) {
    const bool fr = !lp.is_free.empty() && lp.is_free[j];
    const double v = fr ? std::abs(s[j]) : std::max(0.0, -s[j]);
    dres = std::max(dres, v);
  }
  sol.dual_residual = dres / (1.0 + lp.c.lpNorm<Eigen::Infinity>());
  sol.gap = std::abs(sol.objective - by) / (1.0 + std::abs(sol.objective));
}

}  // namespace momrec::lp
