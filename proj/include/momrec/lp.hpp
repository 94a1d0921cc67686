#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace momrec::lp {

// min c.x  s.t.  a x = b,  x_i >= 0 unless is_free[i].
// An empty is_free means every variable is nonnegative.
struct LpStandardForm {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<std::uint8_t> is_free;

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd primal;  // original variable order
  Eigen::VectorXd dual;    // original row order (dropped rows get 0)
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;  // ||ax - b||_inf / (1 + ||b||_inf)
  double dual_residual = 0.0;    // ||a'y + s - c||_inf / (1 + ||c||_inf)
  double gap = 0.0;              // |c.x - b.y| / (1 + |c.x|)
};

// One interior-point iterate, exposed for diagnostics and tests.
struct LpIterate {
  int iteration = 0;
  Eigen::VectorXd x, y, s;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double mu = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct IpmOptions {
  double tol = 1e-8;
  int max_iter = 200;
  std::function<void(const LpIterate&)> on_iterate;
};

// Mehrotra predictor-corrector with dense normal equations. No starting
// point is taken from the caller; the solver builds its own.
LpSolution solve_ipm(const LpStandardForm& lp, const IpmOptions& opts = {});

// Two-phase dense tableau simplex with Bland's rule, kept as an independent
// reference for cross-checking the interior-point solver.
LpSolution solve_simplex_reference(const LpStandardForm& lp);

// Rank-revealing cleanup of linearly dependent equality rows.
struct RowCleanup {
  std::vector<int> kept;  // ascending row indices into the input
  bool consistent = true;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};
RowCleanup remove_dependent_rows(const Eigen::MatrixXd& a,
                                 const Eigen::VectorXd& b);

}  // namespace momrec::lp
