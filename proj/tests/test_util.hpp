#pragma once

// Analytic fixtures shared by the test suites: the minimum-time double
// integrator (closed-form bang-bang optimum), the obstacle-avoidance
// integrator (closed-form lower-envelope optimum), and the Van der Pol
// oscillator. Values derived here are frozen against independent formulas,
// not against library output.

#include <algorithm>
#include <cmath>
#include <vector>

#include "momrec/occupation.hpp"
#include "momrec/ocp_problem.hpp"

namespace momrec::testfix {

// ---- minimum-time double integrator -------------------------------------
// min t_f  s.t.  x1' = x2, x2' = u, u in [-1,1], from (1,1) to (0,0).
// Optimal control: u = -1 until t_s, then u = +1 until t_f, with
// t_s = 1 + sqrt(3/2) and t_f = 1 + 2 sqrt(3/2).

inline double di_switch_time() { return 1.0 + std::sqrt(1.5); }
inline double di_final_time() { return 1.0 + 2.0 * std::sqrt(1.5); }

inline OcpProblem double_integrator() {
  OcpProblem p;
  p.name = "doubleint";
  p.n = 2;
  p.m = 1;
  p.t_range = {0.0, 5.0};
  p.free_final_time = true;
  p.x_box.iv = {{-2.0, 2.0}, {-2.0, 2.0}};
  p.u_box.iv = {{-1.0, 1.0}};
  p.x_init = {1.0, 1.0};
  p.x_final = {0.0, 0.0};
  Polynomial f1{4, {}}, f2{4, {}}, h{4, {}};
  f1.add_term(1.0, {0, 0, 0, 1});  // x2
  f2.add_term(1.0, {0, 1, 0, 0});  // u
  h.add_term(1.0, {0, 0, 0, 0});   // minimum time
  p.dynamics = {f1, f2};
  p.running_cost = h;
  return p;
}

inline void di_state(double t, double& x1, double& x2) {
  const double ts = di_switch_time();
  if (t <= ts) {
    x2 = 1.0 - t;
    x1 = 1.0 + t - 0.5 * t * t;
  } else {
    const double tau = t - ts;
    x2 = -std::sqrt(1.5) + tau;
    x1 = 0.75 - std::sqrt(1.5) * tau + 0.5 * tau * tau;
  }
}

// Sampled optimal process with the switch and final times hit exactly, so
// the left-constant control convention reproduces the bang-bang control
// with no discretization error.
inline SampledProcess di_process(int per_phase) {
  const double ts = di_switch_time();
  const double tf = di_final_time();
  std::vector<double> knots;
  for (int k = 0; k <= per_phase; ++k)
    knots.push_back(ts * k / per_phase);
  for (int k = 1; k <= per_phase; ++k)
    knots.push_back(ts + (tf - ts) * k / per_phase);
  SampledProcess proc;
  const int s = static_cast<int>(knots.size());
  proc.times.resize(s);
  proc.states.resize(2, s);
  proc.controls.resize(1, s);
  for (int k = 0; k < s; ++k) {
    const double t = knots[k];
    proc.times[k] = t;
    di_state(t, proc.states(0, k), proc.states(1, k));
    proc.controls(0, k) = t < ts ? -1.0 : 1.0;
  }
  return proc;
}

// ---- obstacle-avoidance integrator ---------------------------------------
// min int_0^1 x^2  s.t.  x' = u in [-1,1], x(0) = 0, x(1) = 3/4,
// (x - 1/5)^2 + (t - 1/2)^2 >= (1/5)^2.  The optimum rides the lower
// envelope: rest at 0, slope-1 ramp tangent to the disc, the upper arc of
// the disc, then the slope-1 ramp into the endpoint.

inline double obs_ramp_start() { return 0.3 - 0.2 * std::sqrt(2.0); }
inline double obs_arc_enter() { return 0.5 - 0.1 * std::sqrt(2.0); }
inline double obs_arc_exit() { return (1.9 + std::sqrt(0.31)) / 4.0; }

inline OcpProblem obstacle_problem() {
  OcpProblem p;
  p.name = "nonconvex";
  p.n = 1;
  p.m = 1;
  p.t_range = {0.0, 1.0};
  p.free_final_time = false;
  p.x_box.iv = {{-1.0, 1.0}};
  p.u_box.iv = {{-1.0, 1.0}};
  p.x_init = {0.0};
  p.x_final = {0.75};
  Polynomial f{3, {}}, h{3, {}}, g{3, {}};
  f.add_term(1.0, {0, 1, 0});  // u
  h.add_term(1.0, {0, 0, 2});  // x^2
  // (x - 1/5)^2 + (t - 1/2)^2 - (1/5)^2 expanded over (t, u, x).
  g.add_term(1.0, {2, 0, 0});
  g.add_term(-1.0, {1, 0, 0});
  g.add_term(1.0, {0, 0, 2});
  g.add_term(-0.4, {0, 0, 1});
  g.add_term(0.25, {0, 0, 0});
  p.dynamics = {f};
  p.running_cost = h;
  p.path_constraints = {g};
  return p;
}

inline double obs_envelope(double t) {
  const double t0 = obs_ramp_start(), ta = obs_arc_enter(),
               tb = obs_arc_exit();
  if (t <= t0) return 0.0;
  if (t <= ta) return t - t0;
  if (t <= tb) return 0.2 + std::sqrt(std::max(0.0, 0.04 - (t - 0.5) * (t - 0.5)));
  return t - 0.25;
}

// Envelope sampled with the kink times included; controls are interval
// chords, so the piecewise-linear interpolant satisfies x' = u exactly.
inline SampledProcess obs_process(int samples) {
  std::vector<double> knots;
  for (int k = 0; k < samples; ++k)
    knots.push_back(static_cast<double>(k) / (samples - 1));
  knots.push_back(obs_ramp_start());
  knots.push_back(obs_arc_enter());
  knots.push_back(obs_arc_exit());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              knots.end());
  SampledProcess proc;
  const int s = static_cast<int>(knots.size());
  proc.times.resize(s);
  proc.states.resize(1, s);
  proc.controls.resize(1, s);
  for (int k = 0; k < s; ++k) {
    proc.times[k] = knots[k];
    proc.states(0, k) = obs_envelope(knots[k]);
  }
  for (int k = 0; k + 1 < s; ++k) {
    double chord = (proc.states(0, k + 1) - proc.states(0, k)) /
                   (proc.times[k + 1] - proc.times[k]);
    proc.controls(0, k) = std::clamp(chord, -1.0, 1.0);
  }
  proc.controls(0, s - 1) = proc.controls(0, s - 2);
  return proc;
}

// Optimal cost, integrated piecewise: the two ramps in closed form, the arc
// by 64-node Gauss-Legendre (smooth integrand, converged far below 1e-12).
inline double obs_optimal_cost() {
  const double t0 = obs_ramp_start(), ta = obs_arc_enter(),
               tb = obs_arc_exit();
  const double ramp1 = std::pow(ta - t0, 3.0) / 3.0;
  const double ramp2 =
      (std::pow(0.75, 3.0) - std::pow(tb - 0.25, 3.0)) / 3.0;
  Eigen::VectorXd nodes, weights;
  gauss_legendre(64, nodes, weights);
  double arc = 0.0;
  const double half = 0.5 * (tb - ta), mid = 0.5 * (tb + ta);
  for (int k = 0; k < nodes.size(); ++k) {
    const double x = obs_envelope(mid + half * nodes[k]);
    arc += half * weights[k] * x * x;
  }
  return ramp1 + arc + ramp2;
}

// ---- Van der Pol oscillator ----------------------------------------------
// x1' = x2, x2' = -x1 + (1 - x1^2) x2 on [-3,3]^2; uncontrolled.

inline OcpProblem vdp_problem() {
  OcpProblem p;
  p.name = "vdp";
  p.n = 2;
  p.m = 0;
  p.t_range = {0.0, 1.0};
  p.x_box.iv = {{-3.0, 3.0}, {-3.0, 3.0}};
  Polynomial f1{3, {}}, f2{3, {}};
  f1.add_term(1.0, {0, 0, 1});   // x2
  f2.add_term(-1.0, {0, 1, 0});  // -x1
  f2.add_term(1.0, {0, 0, 1});   // x2
  f2.add_term(-1.0, {0, 2, 1});  // -x1^2 x2
  p.dynamics = {f1, f2};
  p.running_cost = Polynomial{3, {}};
  return p;
}

}  // namespace momrec::testfix
