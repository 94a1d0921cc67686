#pragma once

#include <Eigen/Dense>

#include "momrec/moment_vector.hpp"
#include "momrec/ocp_problem.hpp"

namespace momrec {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct QuadratureOptions {
  int nodes_per_segment = 8;
};

// Moments of the occupation measure of a sampled process: for each index
// alpha over (t, u, x), the integral over [t_0, t_S] of (t, u(t), x(t))^alpha
// dt, with x piecewise linear and u piecewise constant between samples.
// Composite Gauss-Legendre per sample interval. Mass equals the duration.
MomentVector occupation_moments(const SampledProcess& proc,
                                const OcpProblem& prob, int degree,
                                const QuadratureOptions& opts = {});

// Moments of the empirical long-run occupation of an autonomous flow:
// integrate dx/dt = f(x) by RK4 from x0, discard [0, burn_in], average
// monomials over the rest, and normalize so the zero moment is exactly 1.
// The problem must be control-free in its dynamics. Escaping x_box throws
// NumericalError.
MomentVector invariant_moments(const OcpProblem& prob,
                               const Eigen::VectorXd& x0, double horizon,
                               double burn_in, int degree, double dt = 1e-3);

// Max over test monomials v = t^i x^k of degree <= test_degree of
// | [v at endpoints] - <dv/dt + grad_x v . f, y> |. Requires endpoint data
// and test_degree + max(1, deg f) <= y.degree.
double check_adjoint_identity(const MomentVector& y, const OcpProblem& prob,
                              int test_degree);

// Same flow identity for an invariant measure (no boundary term), evaluated
// on coordinates rescaled to the unit box so the residual is comparable
// across problems: max over v of | <grad v . f_scaled, y_scaled> |.
double check_invariance_identity(const MomentVector& y,
                                 const OcpProblem& prob, int test_degree);

}  // namespace momrec
