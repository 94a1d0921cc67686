#include "momrec/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "momrec/errors.hpp"

namespace momrec {

SimulatedTrajectory simulate(const OcpProblem& prob,
                             const ControlParameterization& ctrl,
                             const SimulateOptions& opts) {
  prob.validate();
  if (!prob.has_endpoints() && prob.x_init.empty()) {
    throw std::invalid_argument("simulation needs an initial state");
  }
  if (ctrl.segments < 1 || ctrl.controls.cols() != ctrl.segments ||
      ctrl.controls.rows() != prob.m) {
    throw std::invalid_argument("control parameterization dimensions");
  }
  if (!(ctrl.duration > 0.0)) throw std::invalid_argument("need positive duration");
  if (opts.steps_per_segment < 1) {
    throw std::invalid_argument("need at least one step per segment");
  }

  const int n = prob.n;
  const int total = ctrl.segments * opts.steps_per_segment;
  const double t0 = prob.t_range.lo;
  const double h = ctrl.duration / total;
  const bool has_cost = !prob.running_cost.terms.empty();

  SimulatedTrajectory out;
  out.times.resize(total + 1);
  out.states.resize(n, total + 1);
  out.controls.resize(prob.m, total + 1);

  std::vector<double> z(prob.ambient_dim());
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = prob.x_init[j];
  double cost = 0.0;

  // RK4 on (x, running cost); the control is constant inside a step, so the
  // stages never straddle a control switch.
  auto rhs = [&](double t, const Eigen::VectorXd& xs, int seg,
                 Eigen::VectorXd& dx, double& dj) {
    z[0] = t;
    for (int j = 0; j < prob.m; ++j) z[1 + j] = ctrl.controls(j, seg);
    for (int j = 0; j < n; ++j) z[1 + prob.m + j] = xs[j];
    for (int j = 0; j < n; ++j) dx[j] = prob.dynamics[j].eval(z);
    dj = has_cost ? prob.running_cost.eval(z) : 0.0;
  };

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), tmp(n);
  double j1, j2, j3, j4;
  out.times[0] = t0;
  out.states.col(0) = x;
  for (int j = 0; j < prob.m; ++j) out.controls(j, 0) = ctrl.controls(j, 0);

  for (int step = 0; step < total; ++step) {
    const int seg = step / opts.steps_per_segment;
    const double t = t0 + h * step;
    rhs(t, x, seg, k1, j1);
    tmp = x + 0.5 * h * k1;
    rhs(t + 0.5 * h, tmp, seg, k2, j2);
    tmp = x + 0.5 * h * k2;
    rhs(t + 0.5 * h, tmp, seg, k3, j3);
    tmp = x + h * k3;
    rhs(t + h, tmp, seg, k4, j4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cost += (h / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);

    for (int j = 0; j < n; ++j) {
      const Interval& box = prob.x_box.iv[j];
      if (std::abs(x[j] - box.mid()) > 1000.0 * box.length()) {
        throw NumericalError("state explosion during shooting at t = " +
                             std::to_string(t + h));
      }
    }
    out.times[step + 1] = t0 + h * (step + 1);
    out.states.col(step + 1) = x;
    const int seg_next = std::min(ctrl.segments - 1, (step + 1) / opts.steps_per_segment);
    for (int j = 0; j < prob.m; ++j) {
      out.controls(j, step + 1) = ctrl.controls(j, seg_next);
    }
  }
  out.cost = cost;
  return out;
}

namespace {

struct PenaltyEval {
  double total = 0.0;
  double cost = 0.0;
  double terminal = 0.0;  // scaled inf norm
  double path = 0.0;      // scaled max deficit, margin-free
};

// Multiplier estimates of the augmented Lagrangian: one per terminal
// equality, one per path constraint sample, one per state box sample.
struct Multipliers {
  Eigen::VectorXd terminal;
  Eigen::MatrixXd path;
  Eigen::MatrixXd box;
};

class ShootingObjective {
 public:
  ShootingObjective(const OcpProblem& prob, const RefineOptions& opts)
      : prob_(prob), opts_(opts) {
    xscale_.resize(prob.n);
    for (int j = 0; j < prob.n; ++j) {
      xscale_[j] = 0.5 * prob.x_box.iv[j].length();
    }
    for (const auto& g : prob.path_constraints) {
      // Scale each constraint by its coefficient magnitude so the penalty
      // is comparable across problems.
      double s = 0.0;
      for (const auto& t : g.terms) s += std::abs(t.coeff);
      gscale_.push_back(s > 0.0 ? s : 1.0);
    }
  }

  int theta_dim(bool free_time) const {
    return prob_.m * opts_.segments + (free_time ? 1 : 0);
  }

  int samples() const { return opts_.segments * opts_.sim.steps_per_segment + 1; }

  Multipliers zero_multipliers() const {
    Multipliers m;
    m.terminal = Eigen::VectorXd::Zero(prob_.n);
    m.path.setZero(static_cast<Eigen::Index>(prob_.path_constraints.size()),
                   samples());
    m.box.setZero(prob_.n, samples());
    return m;
  }

  ControlParameterization unpack(const Eigen::VectorXd& theta,
                                 double fixed_duration) const {
    ControlParameterization ctrl;
    ctrl.segments = opts_.segments;
    ctrl.controls.resize(prob_.m, opts_.segments);
    for (int k = 0; k < opts_.segments; ++k) {
      for (int j = 0; j < prob_.m; ++j) {
        ctrl.controls(j, k) = theta[k * prob_.m + j];
      }
    }
    ctrl.duration = prob_.free_final_time
                        ? theta[theta.size() - 1]
                        : fixed_duration;
    return ctrl;
  }

  PenaltyEval eval(const Eigen::VectorXd& theta, double fixed_duration,
                   double penalty, const Multipliers& m) const {
    const ControlParameterization ctrl = unpack(theta, fixed_duration);
    const SimulatedTrajectory sim = simulate(prob_, ctrl, opts_.sim);
    return score(sim, penalty, m);
  }

  // Augmented Lagrangian value; penalty <= 0 reports violations only.
  PenaltyEval score(const SimulatedTrajectory& sim, double penalty,
                    const Multipliers& m) const {
    PenaltyEval e;
    e.cost = sim.cost;
    double aug = 0.0;
    const int samples = static_cast<int>(sim.times.size());
    const double rho = penalty / samples;

    const int last = samples - 1;
    for (int j = 0; j < prob_.n; ++j) {
      const double r = (sim.states(j, last) - prob_.x_final[j]) / xscale_[j];
      e.terminal = std::max(e.terminal, std::abs(r));
      if (penalty > 0.0) aug += m.terminal[j] * r + penalty * r * r;
    }

    std::vector<double> z(prob_.ambient_dim());
    for (int k = 0; k < samples; ++k) {
      z[0] = sim.times[k];
      for (int j = 0; j < prob_.m; ++j) z[1 + j] = sim.controls(j, k);
      for (int j = 0; j < prob_.n; ++j) z[1 + prob_.m + j] = sim.states(j, k);
      for (size_t gi = 0; gi < prob_.path_constraints.size(); ++gi) {
        const double g = prob_.path_constraints[gi].eval(z) / gscale_[gi];
        e.path = std::max(e.path, -std::min(g, 0.0));
        if (penalty > 0.0) {
          const double c = opts_.path_margin - g;  // want c <= 0
          const double t = std::max(
              0.0, c + m.path(static_cast<Eigen::Index>(gi), k) / (2.0 * rho));
          aug += rho * t * t;
        }
      }
      // State box excess keeps the shooting iterates inside the model's
      // region of validity.
      for (int j = 0; j < prob_.n; ++j) {
        const Interval& box = prob_.x_box.iv[j];
        const double ex = std::max(0.0, std::abs(sim.states(j, k) - box.mid()) -
                                            0.5 * box.length()) /
                          xscale_[j];
        e.path = std::max(e.path, ex);
        if (penalty > 0.0) {
          const double t = std::max(0.0, ex + m.box(j, k) / (2.0 * rho));
          aug += rho * t * t;
        }
      }
    }
    e.total = e.cost + aug;
    return e;
  }

  // First-order multiplier updates from a round's final trajectory.
  void update_multipliers(const SimulatedTrajectory& sim, double penalty,
                          Multipliers& m) const {
    const int samples = static_cast<int>(sim.times.size());
    const double rho = penalty / samples;
    const int last = samples - 1;
    for (int j = 0; j < prob_.n; ++j) {
      const double r = (sim.states(j, last) - prob_.x_final[j]) / xscale_[j];
      m.terminal[j] += 2.0 * penalty * r;
    }
    std::vector<double> z(prob_.ambient_dim());
    for (int k = 0; k < samples; ++k) {
      z[0] = sim.times[k];
      for (int j = 0; j < prob_.m; ++j) z[1 + j] = sim.controls(j, k);
      for (int j = 0; j < prob_.n; ++j) z[1 + prob_.m + j] = sim.states(j, k);
      for (size_t gi = 0; gi < prob_.path_constraints.size(); ++gi) {
        const double g = prob_.path_constraints[gi].eval(z) / gscale_[gi];
        const double c = opts_.path_margin - g;
        double& mu = m.path(static_cast<Eigen::Index>(gi), k);
        mu = std::max(0.0, mu + 2.0 * rho * c);
      }
      for (int j = 0; j < prob_.n; ++j) {
        const Interval& box = prob_.x_box.iv[j];
        const double ex = std::max(0.0, std::abs(sim.states(j, k) - box.mid()) -
                                            0.5 * box.length()) /
                          xscale_[j];
        double& mu = m.box(j, k);
        mu = std::max(0.0, mu + 2.0 * rho * ex);
      }
    }
  }

 private:
  const OcpProblem& prob_;
  const RefineOptions& opts_;
  std::vector<double> xscale_;
  std::vector<double> gscale_;
};

}  // namespace

RefinementResult local_optimize(const OcpProblem& prob,
                                const SampledProcess& init,
                                const RefineOptions& opts) {
  prob.validate();
  if (!prob.has_endpoints()) {
    throw std::invalid_argument("refinement needs endpoint states");
  }
  if (opts.segments < 1) throw std::invalid_argument("need segments >= 1");
  if (init.samples() < 2) {
    throw std::invalid_argument("initial guess needs at least 2 samples");
  }

  const bool free_time = prob.free_final_time;
  const double tlen = prob.t_range.length();
  const double fixed_duration = tlen;
  const ShootingObjective obj(prob, opts);
  const int dim = obj.theta_dim(free_time);

  // Bounds: controls inside their boxes, duration inside the time box.
  Eigen::VectorXd lo(dim), hi(dim);
  for (int k = 0; k < opts.segments; ++k) {
    for (int j = 0; j < prob.m; ++j) {
      lo[k * prob.m + j] = prob.u_box.iv[j].lo;
      hi[k * prob.m + j] = prob.u_box.iv[j].hi;
    }
  }
  if (free_time) {
    lo[dim - 1] = 0.05 * tlen;
    hi[dim - 1] = tlen;
  }

  // Initial controls: sample the guess at segment midpoints.
  double duration0 = free_time
                         ? std::min(hi[dim - 1], std::max(lo[dim - 1], init.duration()))
                         : fixed_duration;
  Eigen::VectorXd theta(dim);
  for (int k = 0; k < opts.segments; ++k) {
    const double tm =
        prob.t_range.lo + duration0 * (k + 0.5) / opts.segments;
    // Linear interpolation in the guess's sample times.
    int idx = 0;
    while (idx + 2 < init.samples() && init.times[idx + 1] < tm) ++idx;
    const double span = init.times[idx + 1] - init.times[idx];
    double a = span > 0.0 ? (tm - init.times[idx]) / span : 0.0;
    a = std::min(1.0, std::max(0.0, a));
    for (int j = 0; j < prob.m; ++j) {
      const double v = (1.0 - a) * init.controls(j, idx) +
                       a * init.controls(j, idx + 1);
      theta[k * prob.m + j] =
          std::min(hi[k * prob.m + j], std::max(lo[k * prob.m + j], v));
    }
  }
  if (free_time) theta[dim - 1] = duration0;

  const auto project = [&](Eigen::VectorXd v) {
    for (int j = 0; j < dim; ++j) v[j] = std::min(hi[j], std::max(lo[j], v[j]));
    return v;
  };

  RefinementResult best;
  bool have_best = false;
  bool last_inner_converged = false;
  int total_iters = 0;
  double penalty = opts.penalty_initial;
  double prev_viol = std::numeric_limits<double>::infinity();
  Multipliers mult = obj.zero_multipliers();

  for (int round = 0; round < opts.penalty_rounds; ++round) {
    // Projected BFGS with central finite differences. Coordinates the
    // gradient presses against a bound are frozen out of the quasi-Newton
    // direction; otherwise projecting the step can turn it into ascent.
    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);
    PenaltyEval cur = obj.eval(theta, fixed_duration, penalty, mult);
    Eigen::VectorXd grad(dim);
    std::vector<char> active(dim, 0);
    auto gradient = [&](const Eigen::VectorXd& at) {
      Eigen::VectorXd g(dim);
      for (int j = 0; j < dim; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(at[j]));
        Eigen::VectorXd p = at;
        p[j] = at[j] + step;
        const double fp = obj.eval(p, fixed_duration, penalty, mult).total;
        p[j] = at[j] - step;
        const double fm = obj.eval(p, fixed_duration, penalty, mult).total;
        g[j] = (fp - fm) / (2.0 * step);
      }
      return g;
    };
    grad = gradient(theta);
    bool converged_inner = false;
    std::vector<double> trace;
    trace.reserve(opts.max_inner_iterations);

    for (int it = 0; it < opts.max_inner_iterations; ++it) {
      ++total_iters;
      const double stat =
          (project(theta - grad) - theta).lpNorm<Eigen::Infinity>();
      if (stat <= opts.opt_tol * (1.0 + std::abs(cur.total))) {
        converged_inner = true;
        break;
      }
      // Bang-bang structure keeps the projected gradient large even at the
      // solution; a round that gains less than the tolerance over a window
      // of steps has reached its achievable accuracy.
      trace.push_back(cur.total);
      constexpr int kWindow = 10;
      if (it >= kWindow &&
          trace[it - kWindow] - cur.total <=
              opts.opt_tol * (1.0 + std::abs(cur.total))) {
        converged_inner = true;
        break;
      }

      bool active_changed = false;
      for (int j = 0; j < dim; ++j) {
        const double edge = 1e-10 * (1.0 + hi[j] - lo[j]);
        const char a = (theta[j] - lo[j] <= edge && grad[j] > 0.0) ||
                               (hi[j] - theta[j] <= edge && grad[j] < 0.0)
                           ? 1
                           : 0;
        active_changed |= a != active[j];
        active[j] = a;
      }
      if (active_changed) hinv.setIdentity();
      Eigen::VectorXd gr = grad;
      for (int j = 0; j < dim; ++j) {
        if (active[j]) gr[j] = 0.0;
      }

      Eigen::VectorXd dir = -(hinv * gr);
      for (int j = 0; j < dim; ++j) {
        if (active[j]) dir[j] = 0.0;
      }
      bool steepest = false;
      if (dir.dot(gr) > -1e-14 * dir.norm() * gr.norm()) {
        hinv.setIdentity();
        dir = -gr;
        steepest = true;
      }

      Eigen::VectorXd cand;
      PenaltyEval cand_eval;
      bool accepted = false;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        if (attempt == 1) {
          if (steepest) break;
          hinv.setIdentity();
          dir = -gr;
        }
        double alpha = 1.0;
        for (int ls = 0; ls < 40; ++ls) {
          cand = project(theta + alpha * dir);
          const Eigen::VectorXd step = cand - theta;
          if (step.lpNorm<Eigen::Infinity>() < 1e-15) break;
          cand_eval = obj.eval(cand, fixed_duration, penalty, mult);
          if (cand_eval.total <= cur.total + 1e-4 * gr.dot(step)) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
      }
      if (!accepted) {
        converged_inner = true;  // no descent along the projected gradient
        break;
      }

      const Eigen::VectorXd gnew = gradient(cand);
      const Eigen::VectorXd s = cand - theta;
      const Eigen::VectorXd dg = gnew - grad;
      const double sy = s.dot(dg);
      if (sy > 1e-12 * s.norm() * dg.norm()) {
        const Eigen::VectorXd hy = hinv * dg;
        const double yhy = dg.dot(hy);
        // BFGS inverse update.
        hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
        hinv -= (hy * s.transpose() + s * hy.transpose()) / sy;
      } else {
        hinv.setIdentity();
      }
      theta = cand;
      cur = cand_eval;
      grad = gnew;
    }

    // Keep the best round by feasibility, then cost.
    const ControlParameterization ctrl = obj.unpack(theta, fixed_duration);
    const SimulatedTrajectory sim = simulate(prob, ctrl, opts.sim);
    const PenaltyEval fin = obj.score(sim, 0.0, mult);
    RefinementResult rr;
    rr.control = ctrl;
    rr.trajectory = sim;
    rr.cost = sim.cost;
    rr.terminal_violation = fin.terminal;
    rr.path_violation = fin.path;
    last_inner_converged = converged_inner;
    const bool feas = fin.terminal <= opts.feas_tol && fin.path <= opts.feas_tol;
    const bool best_feas = have_best && best.terminal_violation <= opts.feas_tol &&
                           best.path_violation <= opts.feas_tol;
    const bool better =
        !have_best ||
        (feas && !best_feas) ||
        (feas == best_feas &&
         (feas ? rr.cost < best.cost
               : std::max(rr.terminal_violation, rr.path_violation) <
                     std::max(best.terminal_violation, best.path_violation)));
    if (better) {
      best = rr;
      have_best = true;
    }
    obj.update_multipliers(sim, penalty, mult);
    // Escalate only when a round fails to cut the violation by 4x; at a
    // moderate penalty the multiplier updates do the precision work while
    // the subproblems stay well conditioned.
    const double viol = std::max(fin.terminal, fin.path);
    if (viol > 0.25 * prev_viol && viol > opts.feas_tol) {
      penalty *= opts.penalty_factor;
    }
    prev_viol = viol;
  }

  best.iterations = total_iters;
  // Converged means the continuation finished with its final subproblem
  // solved to the achievable accuracy and the returned iterate feasible.
  best.converged = last_inner_converged &&
                   best.terminal_violation <= opts.feas_tol &&
                   best.path_violation <= opts.feas_tol;
  return best;
}

RefinementResult local_optimize(const OcpProblem& prob,
                                const ReconstructedProcess& init,
                                const RefineOptions& opts) {
  return local_optimize(prob, init.assembled, opts);
}

Certification certify_global(double local_cost, double relaxation_bound,
                             double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("certification tol must be positive");
  Certification cert;
  cert.gap = local_cost - relaxation_bound;
  const double scale = std::max(1.0, std::abs(relaxation_bound));
  cert.certified = cert.gap <= tol * scale && cert.gap >= -tol * scale;
  cert.local_below_bound = cert.gap < -tol * scale;
  return cert;
}

}  // namespace momrec
