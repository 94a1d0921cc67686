#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "momrec/domain.hpp"
#include "momrec/polynomial.hpp"

namespace momrec {

// Polynomial optimal control problem on a time interval, with box state and
// control constraints and optional polynomial path constraints g(t,u,x) >= 0.
// All polynomials live over the ambient (t, u_1..u_m, x_1..x_n).
struct OcpProblem {
  std::string name;
  int n = 0;  // states
  int m = 0;  // controls
  Interval t_range{0.0, 1.0};
  bool free_final_time = false;
  Box x_box;
  Box u_box;
  std::vector<double> x_init;   // size n, or empty
  std::vector<double> x_final;  // size n, or empty
  std::vector<Polynomial> dynamics;  // size n
  Polynomial running_cost;
  std::vector<Polynomial> path_constraints;

  int ambient_dim() const { return 1 + m + n; }
  bool has_endpoints() const { return !x_init.empty() && !x_final.empty(); }
  CoordinateSystem coordinates() const;        // t, u..., x...
  CoordinateSystem state_coordinates() const;  // x... only
  void validate() const;
};

// Time-sampled trajectory/control pair. Controls are held constant from the
// left sample of each interval.
struct SampledProcess {
  Eigen::VectorXd times;     // strictly increasing, size S >= 2
  Eigen::MatrixXd states;    // n x S
  Eigen::MatrixXd controls;  // m x S

  int samples() const { return static_cast<int>(times.size()); }
  double duration() const;
  void validate(const OcpProblem& prob, double slack = 1e-9) const;
};

}  // namespace momrec
