#pragma once

#include <Eigen/Dense>

#include "momrec/ocp_problem.hpp"
#include "momrec/series.hpp"

namespace momrec {

// Piecewise-constant control on `segments` equal slices of the horizon.
// For free-final-time problems the duration is a decision variable.
struct ControlParameterization {
  int segments = 1;
  Eigen::MatrixXd controls;  // m x segments
  double duration = 1.0;
};

struct SimulatedTrajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
  Eigen::MatrixXd controls;
  double cost = 0.0;  // integral of the running cost
};

struct SimulateOptions {
  int steps_per_segment = 20;
};

// Classical RK4 on the state augmented with the running cost, from
// prob.x_init. A state leaving a 1000x inflated state box aborts with
// NumericalError.
SimulatedTrajectory simulate(const OcpProblem& prob,
                             const ControlParameterization& ctrl,
                             const SimulateOptions& opts = {});

struct RefineOptions {
  int segments = 40;
  double feas_tol = 1e-4;
  // Inner rounds stop once ten successive iterations gain less than this
  // relative amount; a stationarity test alone never fires on bang-bang
  // solutions.
  double opt_tol = 1e-5;
  // A weak first round can walk the iterate out of the initializer's basin
  // before the multipliers catch up; this start keeps constraint pressure
  // comparable to the cost terms from the beginning.
  double penalty_initial = 1000.0;
  double penalty_factor = 10.0;
  int penalty_rounds = 5;
  int max_inner_iterations = 200;
  // Inequality path constraints are tightened by this margin inside the
  // penalty, so a solution riding a constraint boundary still satisfies the
  // true constraints after the inner solves stop short of exactness.
  double path_margin = 5e-4;
  SimulateOptions sim;
};

struct RefinementResult {
  ControlParameterization control;
  SimulatedTrajectory trajectory;
  double cost = 0.0;
  double terminal_violation = 0.0;  // scaled inf norm at the final state
  double path_violation = 0.0;      // worst scaled constraint deficit
  bool converged = false;
  int iterations = 0;
};

// Single shooting: an augmented Lagrangian on terminal and path constraints
// with geometric penalty continuation, each round minimized by a projected
// BFGS method with finite-difference gradients. Controls stay inside their
// boxes by projection; a free duration is bounded within the time box.
RefinementResult local_optimize(const OcpProblem& prob,
                                const SampledProcess& init,
                                const RefineOptions& opts = {});
RefinementResult local_optimize(const OcpProblem& prob,
                                const ReconstructedProcess& init,
                                const RefineOptions& opts = {});

struct Certification {
  bool certified = false;
  double gap = 0.0;
  // Local cost below the relaxation bound by more than the tolerance:
  // the bound or the refinement is suspect.
  bool local_below_bound = false;
};

// A refined cost within tol * max(1, |bound|) of a relaxation lower bound
// certifies global optimality to that tolerance.
Certification certify_global(double local_cost, double relaxation_bound,
                             double tol = 1e-2);

}  // namespace momrec
