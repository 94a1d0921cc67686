#pragma once

#include <Eigen/Dense>

#include "momrec/grid.hpp"
#include "momrec/moment_vector.hpp"

namespace momrec {

// Finitely many weighted points approximating a measure. fit_error is the
// optimal inf-norm moment mismatch of the producing fit.
struct AtomicMeasure {
  CoordinateSystem coords;
  Eigen::MatrixXd points;   // dim x k, original (unscaled) coordinates
  Eigen::VectorXd weights;  // >= 0
  double fit_error = 0.0;

  int size() const { return static_cast<int>(weights.size()); }
  double mass() const { return weights.sum(); }
};

// Monomial evaluation matrix of the grid: rows indices, columns grid points.
Eigen::MatrixXd build_moment_matrix(const Grid& grid,
                                    const std::vector<MultiIndex>& indices);

struct FitOptions {
  // Rescale grid and moments to [-1, 1]^dim before solving; the reported
  // fit_error then measures mismatch of the rescaled moments.
  bool rescale = true;
  double ipm_tol = 1e-8;
  int ipm_max_iter = 200;
  // Large degenerate grids can stall the interior-point solve short of
  // ipm_tol; the best iterate is still accepted when its relative residuals
  // and gap are all within this looser bound.
  double feas_tol = 1e-5;
  // Fits above this many grid points are refused outright.
  int max_grid_points = 1000000;
};

// Best nonnegative weights on the grid under the inf-norm moment mismatch,
//   minimize  max_alpha | y_alpha - sum_i w_i z_i^alpha |,
// solved as an LP by the interior-point method. Grid coordinates must match
// the moment vector's. Solver failure throws NumericalError with
// diagnostics.
AtomicMeasure fit_atomic(const MomentVector& y, const Grid& grid,
                         const FitOptions& opts = {});

struct SupportExtraction {
  AtomicMeasure measure;
  double retained_mass_fraction = 1.0;
};

// Keep atoms whose weight is at least rel_threshold times the largest
// weight. rel_threshold must lie strictly between 0 and 1.
SupportExtraction extract_support(const AtomicMeasure& mu,
                                  double rel_threshold = 1e-3);

}  // namespace momrec
