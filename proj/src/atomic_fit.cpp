#include "momrec/atomic_fit.hpp"

#include <cstdio>
#include <string>

#include "momrec/errors.hpp"
#include "momrec/kernels.hpp"
#include "momrec/lp.hpp"

namespace momrec {

Eigen::MatrixXd build_moment_matrix(const Grid& grid,
                                    const std::vector<MultiIndex>& indices) {
  if (grid.size() == 0) throw std::invalid_argument("empty grid");
  return kernels::moment_matrix(grid.points, indices);
}

AtomicMeasure fit_atomic(const MomentVector& y, const Grid& grid,
                         const FitOptions& opts) {
  y.validate();
  if (!grid.coords.same_layout(y.coords, 1e-9)) {
    throw std::invalid_argument(
        "grid coordinates do not match the moment vector");
  }
  if (grid.size() > opts.max_grid_points) {
    throw std::invalid_argument("grid has " + std::to_string(grid.size()) +
                                " points, above the limit of " +
                                std::to_string(opts.max_grid_points));
  }

  // Condition the LP by mapping everything onto [-1, 1]^dim first; weights
  // are invariant under the pushforward.
  Eigen::MatrixXd pts = grid.points;
  MomentVector ys = y;
  if (opts.rescale) {
    const AffineMap map = box_affinity(y.coords.box(), unit_box(y.dim()));
    ys = rescale_moments(y, map);
    for (int p = 0; p < grid.size(); ++p) {
      pts.col(p) = map.apply(grid.points.col(p));
    }
  }

  const Eigen::MatrixXd amat = kernels::moment_matrix(pts, ys.indices);
  const int k = static_cast<int>(amat.rows());
  const int q = grid.size();

  // Variables [w (q), lambda, s1 (k), s2 (k)] with
  //   A w + lambda - s1 = y  and  A w - lambda + s2 = y,
  // which pins lambda >= |y - A w| rowwise; minimizing lambda gives the
  // inf-norm fit.
  lp::LpStandardForm lp;
  lp.a.setZero(2 * k, q + 1 + 2 * k);
  lp.a.block(0, 0, k, q) = amat;
  lp.a.block(k, 0, k, q) = amat;
  lp.a.block(0, q, k, 1).setConstant(1.0);
  lp.a.block(k, q, k, 1).setConstant(-1.0);
  lp.a.block(0, q + 1, k, k) = -Eigen::MatrixXd::Identity(k, k);
  lp.a.block(k, q + 1 + k, k, k) = Eigen::MatrixXd::Identity(k, k);
  lp.b.resize(2 * k);
  lp.b.head(k) = ys.values;
  lp.b.tail(k) = ys.values;
  lp.c = Eigen::VectorXd::Zero(q + 1 + 2 * k);
  lp.c[q] = 1.0;

  lp::IpmOptions iopts;
  iopts.tol = opts.ipm_tol;
  iopts.max_iter = opts.ipm_max_iter;
  const lp::LpSolution sol = lp::solve_ipm(lp, iopts);
  const bool near_feasible =
      sol.status == lp::LpStatus::IterationLimit &&
      sol.primal_residual <= opts.feas_tol &&
      sol.dual_residual <= opts.feas_tol && sol.gap <= opts.feas_tol;
  if (sol.status != lp::LpStatus::Optimal && !near_feasible) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "atomic fit LP did not solve: %s after %d iterations "
                  "(primal %.2e, dual %.2e, gap %.2e)",
                  lp::to_string(sol.status), sol.iterations,
                  sol.primal_residual, sol.dual_residual, sol.gap);
    throw NumericalError(buf);
  }

  AtomicMeasure mu;
  mu.coords = y.coords;
  mu.points = grid.points;
  mu.weights = sol.primal.head(q).cwiseMax(0.0);
  mu.fit_error = sol.primal[q];
  return mu;
}

SupportExtraction extract_support(const AtomicMeasure& mu,
                                  double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw std::invalid_argument(
        "support threshold must lie strictly between 0 and 1");
  }
  if (mu.size() == 0) throw std::invalid_argument("empty atomic measure");
  const double wmax = mu.weights.maxCoeff();
  if (!(wmax > 0.0)) {
    throw NumericalError("support extraction on an all-zero fit");
  }
  const double cut = rel_threshold * wmax;
  std::vector<int> keep;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu.weights[i] >= cut) keep.push_back(i);
  }
  SupportExtraction out;
  out.measure.coords = mu.coords;
  out.measure.fit_error = mu.fit_error;
  out.measure.points.resize(mu.points.rows(), static_cast<Eigen::Index>(keep.size()));
  out.measure.weights.resize(static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    out.measure.points.col(static_cast<Eigen::Index>(i)) = mu.points.col(keep[i]);
    out.measure.weights[static_cast<Eigen::Index>(i)] = mu.weights[keep[i]];
  }
  const double total = mu.weights.sum();
  out.retained_mass_fraction =
      total > 0.0 ? out.measure.weights.sum() / total : 0.0;
  return out;
}

}  // namespace momrec
