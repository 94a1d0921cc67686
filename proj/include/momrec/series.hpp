#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "momrec/atomic_fit.hpp"
#include "momrec/moment_vector.hpp"
#include "momrec/ocp_problem.hpp"

namespace momrec {

struct WayPoint {
  double time = 0.0;
  double value = 0.0;
  double weight = 0.0;
};

// A time cell whose atoms spread too far to average into one way-point.
struct MultiModalCell {
  double time = 0.0;
  double spread = 0.0;
};

// Time series of one reconstructed coordinate.
struct CoordinateSeries {
  CoordKind kind = CoordKind::State;
  int ordinal = 1;
  std::string label;
  std::vector<WayPoint> way_points;  // ascending time
  std::vector<MultiModalCell> multimodal;
  double fit_error = 0.0;
  double retained_mass_fraction = 1.0;
};

// Ambient indices supported on the time coordinate and coordinate
// `coord_position` only, up to `degree`, graded-lex.
std::vector<MultiIndex> marginal_indices(const CoordinateSystem& coords,
                                         int coord_position, int degree);

struct ReconstructOptions {
  int grid_time = 101;
  int grid_coord = 101;
  double threshold = 1e-3;
  // A time cell is flagged multi-modal when its atom values spread over
  // more than this fraction of the coordinate's range.
  double spread_fraction = 0.25;
  // Atoms this much lighter than their cell's heaviest atom are vertex
  // residue of the fit and are ignored when the cell is aggregated.
  double cell_weight_fraction = 0.05;
  FitOptions fit;
};

// Marginalize onto (t, coordinate), fit atoms on a 2-D grid, prune, and
// aggregate each time cell into a weighted mean way-point. The time
// coordinate itself cannot be reconstructed against itself and is rejected.
CoordinateSeries reconstruct_coordinate(const MomentVector& y,
                                        int coord_position,
                                        const ReconstructOptions& opts = {});
// Same on a caller-supplied 2-D grid over (t, coordinate).
CoordinateSeries reconstruct_coordinate(const MomentVector& y,
                                        int coord_position, const Grid& grid,
                                        const ReconstructOptions& opts = {});

struct ReconstructedProcess {
  std::vector<CoordinateSeries> states;
  std::vector<CoordinateSeries> controls;
  SampledProcess assembled;
  double duration = 0.0;
};

// Merge per-coordinate series into one uniformly sampled process on
// [t_lo, t_lo + duration]: linear interpolation between way-points, nearest
// value beyond the ends, duplicate times pooled by weight, controls clamped
// to their boxes. Needs a complete set of state and control series.
ReconstructedProcess assemble_process(const OcpProblem& prob,
                                      const std::vector<CoordinateSeries>& series,
                                      double duration, int n_time_samples);

struct DensityFit {
  Eigen::VectorXd coeffs;  // x_j(t) ~ sum_k coeffs[k] t^k
  bool regularized = false;
};

// Classical alternative to atomic fitting: least-squares polynomial graph
// t -> x_j(t) matched to the cross moments through a Hankel system in the
// time moments. Kept as a baseline; it smears discontinuous controls.
DensityFit polynomial_density_baseline(const MomentVector& y,
                                       int coord_position, int density_degree);

}  // namespace momrec
