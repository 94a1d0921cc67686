#include <cmath>
#include <vector>

#include "momrec/lp.hpp"
#include "momrec/lp_internal.hpp"

namespace momrec::lp {

namespace {

constexpr double kPivotTol = 1e-10;

// Dense tableau: m rows plus an objective row, columns of a, artificials,
// and the right-hand side. Bland's smallest-index rule throughout, so no
// cycling on degenerate bases.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())) {
    t_.resize(m_ + 1, n_ + m_ + 1);
    t_.setZero();
    t_.block(0, 0, m_, n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(n_ + m_).head(m_) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Phase-1 objective (sum of artificials) reduced against the artificial
  // basis.
  void set_phase1_objective() {
    for (int j = 0; j <= n_ + m_; ++j) {
      if (j >= n_ && j < n_ + m_) {
        t_(m_, j) = 0.0;
      } else {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) s += t_(i, j);
        t_(m_, j) = -s;
      }
    }
  }

  void set_phase2_objective(const Eigen::VectorXd& c) {
    for (int j = 0; j <= n_ + m_; ++j) {
      double v = (j < n_) ? c[j] : 0.0;
      for (int i = 0; i < m_; ++i) {
        const int bv = basis_[i];
        const double cb = (bv < n_) ? c[bv] : 0.0;
        v -= cb * t_(i, j);
      }
      t_(m_, j) = v;
    }
  }

  // One Bland step. Returns 0 on a pivot, 1 at optimality, -1 when the
  // entering column is unbounded.
  int step(bool allow_artificial) {
    const int limit = allow_artificial ? n_ + m_ : n_;
    int enter = -1;
    for (int j = 0; j < limit; ++j) {
      if (t_(m_, j) < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return 1;

    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double aij = t_(i, enter);
      if (aij > kPivotTol) {
        const double ratio = t_(i, n_ + m_) / aij;
        if (leave < 0 || ratio < best - kPivotTol ||
            (std::abs(ratio - best) <= kPivotTol && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) return -1;
    pivot(leave, enter);
    return 0;
  }

  void pivot(int row, int col) {
    const double p = t_(row, col);
    t_.row(row) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[row] = col;
  }

  // Pivot basic artificials onto structural columns where possible.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > kPivotTol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double phase1_objective() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) s += t_(i, n_ + m_);
    }
    return s;
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = t_(i, n_ + m_);
    }
    return x;
  }

  const std::vector<int>& basis() const { return basis_; }
  int n() const { return n_; }

 private:
  int m_, n_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_simplex_reference(const LpStandardForm& lp_in) {
  lp_in.validate();
  const FreeSplit fs = split_free(lp_in);
  const RowCleanup rc = remove_dependent_rows(fs.lp.a, fs.lp.b);

  LpSolution sol;
  const int n_orig = lp_in.cols();
  auto pack = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y_clean) {
    sol.primal = fs.merge(x, n_orig);
    sol.dual = Eigen::VectorXd::Zero(lp_in.rows());
    for (size_t i = 0; i < rc.kept.size(); ++i) sol.dual[rc.kept[i]] = y_clean[i];
    finish_solution(lp_in, sol);
  };

  if (!rc.consistent) {
    sol.status = LpStatus::Infeasible;
    pack(Eigen::VectorXd::Zero(fs.lp.cols()),
         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rc.kept.size())));
    return sol;
  }

  Eigen::MatrixXd a = rc.a;
  Eigen::VectorXd b = rc.b;
  const Eigen::VectorXd& c = fs.lp.c;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  if (m == 0) {
    const bool bounded = (c.array() >= 0.0).all();
    sol.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
    pack(Eigen::VectorXd::Zero(n), Eigen::VectorXd());
    return sol;
  }

  std::vector<char> flipped(m, 0);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
      flipped[i] = 1;
    }
  }

  Tableau tab(a, b);
  tab.set_phase1_objective();
  const int max_pivots = 100000;
  int pivots = 0;
  while (pivots++ < max_pivots) {
    const int r = tab.step(true);
    if (r == 1) break;
    if (r == -1) {
      // Phase-1 objective is bounded below by zero; cannot happen.
      sol.status = LpStatus::IterationLimit;
      pack(tab.primal(), Eigen::VectorXd::Zero(m));
      return sol;
    }
  }
  sol.iterations = pivots;
  if (tab.phase1_objective() > 1e-7 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
    sol.status = LpStatus::Infeasible;
    pack(tab.primal(), Eigen::VectorXd::Zero(m));
    return sol;
  }
  tab.expel_artificials();

  tab.set_phase2_objective(c);
  bool unbounded = false;
  while (pivots++ < max_pivots) {
    const int r = tab.step(false);
    if (r == 1) break;
    if (r == -1) {
      unbounded = true;
      break;
    }
  }
  sol.iterations = pivots;
  if (pivots >= max_pivots) {
    sol.status = LpStatus::IterationLimit;
    pack(tab.primal(), Eigen::VectorXd::Zero(m));
    return sol;
  }

  // Duals from the final basis: solve B' y = c_B over the cleaned rows.
  Eigen::MatrixXd bmat(m, m);
  Eigen::VectorXd cb(m);
  for (int i = 0; i < m; ++i) {
    const int bv = tab.basis()[i];
    if (bv < n) {
      bmat.col(i) = a.col(bv);
      cb[i] = c[bv];
    } else {
      bmat.col(i) = Eigen::VectorXd::Unit(m, bv - n);
      cb[i] = 0.0;
    }
  }
  Eigen::VectorXd y = bmat.transpose().colPivHouseholderQr().solve(cb);
  for (int i = 0; i < m; ++i) {
    if (flipped[i]) y[i] = -y[i];
  }

  sol.status = unbounded ? LpStatus::Unbounded : LpStatus::Optimal;
  pack(tab.primal(), y);
  return sol;
}

}  // namespace momrec::lp
