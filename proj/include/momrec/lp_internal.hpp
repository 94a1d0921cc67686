#pragma once

#include <vector>

#include "momrec/lp.hpp"

namespace momrec::lp {

// Internal helpers shared by the two solvers.

// Rewrites free variables as differences of two nonnegative ones.
struct FreeSplit {
  LpStandardForm lp;  // all-nonnegative equivalent
  bool any = false;
  std::vector<int> neg_col;  // per original column, index of the negative part
  Eigen::VectorXd merge(const Eigen::VectorXd& x_split, int n_orig) const;
};

FreeSplit split_free(const LpStandardForm& lp);

// Fills objective, residuals, and gap of a solution against the original
// problem data.
void finish_solution(const LpStandardForm& lp, LpSolution& sol);

}  // namespace momrec::lp
