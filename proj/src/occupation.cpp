#include "momrec/occupation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "momrec/errors.hpp"
#include "momrec/kernels.hpp"

namespace momrec {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1");
  nodes.resize(n);
  weights.resize(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

MomentVector occupation_moments(const SampledProcess& proc,
                                const OcpProblem& prob, int degree,
                                const QuadratureOptions& opts) {
  prob.validate();
  proc.validate(prob);
  if (degree < 2 || degree % 2 != 0) {
    throw std::invalid_argument("moment degree must be even and >= 2");
  }
  if (opts.nodes_per_segment < 1) {
    throw std::invalid_argument("need at least one quadrature node");
  }

  Eigen::VectorXd gl_x, gl_w;
  gauss_legendre(opts.nodes_per_segment, gl_x, gl_w);

  const int dim = prob.ambient_dim();
  const int nseg = proc.samples() - 1;
  const int total = nseg * opts.nodes_per_segment;
  Eigen::MatrixXd pts(dim, total);
  Eigen::VectorXd w(total);
  int col = 0;
  for (int k = 0; k < nseg; ++k) {
    const double t0 = proc.times[k];
    const double t1 = proc.times[k + 1];
    const double half = 0.5 * (t1 - t0);
    const double mid = 0.5 * (t0 + t1);
    for (int g = 0; g < opts.nodes_per_segment; ++g, ++col) {
      const double t = mid + half * gl_x[g];
      const double a = (t - t0) / (t1 - t0);
      pts(0, col) = t;
      for (int j = 0; j < prob.m; ++j) pts(1 + j, col) = proc.controls(j, k);
      for (int j = 0; j < prob.n; ++j) {
        pts(1 + prob.m + j, col) =
            (1.0 - a) * proc.states(j, k) + a * proc.states(j, k + 1);
      }
      w[col] = half * gl_w[g];
    }
  }

  MomentVector y = make_moment_vector(prob.coordinates(), degree);
  y.values = kernels::weighted_monomial_sums(pts, w, y.indices);
  y.problem_name = prob.name;
  if (!y.values.allFinite()) {
    throw NumericalError("non-finite occupation moment");
  }
  return y;
}

namespace {

// Right-hand side of the autonomous flow; the ambient still carries the
// (t, u) slots, held at fixed values.
void autonomous_rhs(const OcpProblem& prob, std::vector<double>& z,
                    const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
  const int off = 1 + prob.m;
  for (int j = 0; j < prob.n; ++j) z[off + j] = x[j];
  for (int j = 0; j < prob.n; ++j) dx[j] = prob.dynamics[j].eval(z);
}

}  // namespace

MomentVector invariant_moments(const OcpProblem& prob,
                               const Eigen::VectorXd& x0, double horizon,
                               double burn_in, int degree, double dt) {
  prob.validate();
  if (degree < 2 || degree % 2 != 0) {
    throw std::invalid_argument("moment degree must be even and >= 2");
  }
  if (!(horizon > burn_in) || !(burn_in > 0.0)) {
    throw std::invalid_argument("need horizon > burn_in > 0");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("need dt > 0");
  if (x0.size() != prob.n) {
    throw std::invalid_argument("initial state dimension mismatch");
  }
  if (!prob.x_box.contains(x0)) {
    throw std::invalid_argument("initial state outside state box");
  }
  for (const auto& f : prob.dynamics) {
    for (const auto& t : f.terms) {
      if (t.alpha[0] != 0) {
        throw std::invalid_argument("invariant flow must be autonomous");
      }
      for (int k = 0; k < prob.m; ++k) {
        if (t.alpha[1 + k] != 0) {
          throw std::invalid_argument("invariant flow must be control-free");
        }
      }
    }
  }

  const auto indices = enumerate_indices(prob.n, degree);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(indices.size()));

  std::vector<double> z(prob.ambient_dim(), 0.0);
  z[0] = prob.t_range.lo;
  for (int k = 0; k < prob.m; ++k) z[1 + k] = prob.u_box.iv[k].mid();

  const int chunk = 1 << 16;
  Eigen::MatrixXd buf(prob.n, chunk);
  Eigen::VectorXd bw(chunk);
  int fill = 0;
  auto flush = [&]() {
    if (fill == 0) return;
    acc += kernels::weighted_monomial_sums(buf.leftCols(fill), bw.head(fill),
                                           indices);
    fill = 0;
  };

  Eigen::VectorXd x = x0, k1(prob.n), k2(prob.n), k3(prob.n), k4(prob.n),
                  tmp(prob.n);
  double t = 0.0;
  while (t < horizon - 1e-12) {
    const double h = std::min(dt, horizon - t);
    if (t >= burn_in) {
      buf.col(fill) = x;
      bw[fill] = h;
      if (++fill == chunk) flush();
    }
    autonomous_rhs(prob, z, x, k1);
    tmp = x + 0.5 * h * k1;
    autonomous_rhs(prob, z, tmp, k2);
    tmp = x + 0.5 * h * k2;
    autonomous_rhs(prob, z, tmp, k3);
    tmp = x + h * k3;
    autonomous_rhs(prob, z, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (!prob.x_box.contains(x, 1e-9)) {
      throw NumericalError("trajectory escaped the state box at t = " +
                           std::to_string(t));
    }
  }
  flush();

  if (!(acc[0] > 0.0)) {
    throw NumericalError("no samples beyond the burn-in window");
  }
  MomentVector y = make_moment_vector(prob.state_coordinates(), degree);
  y.values = acc / acc[0];
  y.problem_name = prob.name;
  if (!y.values.allFinite()) {
    throw NumericalError("non-finite invariant moment");
  }
  return y;
}

double check_adjoint_identity(const MomentVector& y, const OcpProblem& prob,
                              int test_degree) {
  y.validate();
  prob.validate();
  if (!prob.has_endpoints()) {
    throw std::invalid_argument("adjoint check needs endpoint states");
  }
  if (!y.coords.same_layout(prob.coordinates(), 1e-9)) {
    throw std::invalid_argument("moment coordinates do not match the problem");
  }
  if (test_degree < 0) throw std::invalid_argument("negative test degree");
  int fdeg = 1;
  for (const auto& f : prob.dynamics) fdeg = std::max(fdeg, f.degree());
  if (test_degree + fdeg > y.degree) {
    throw std::invalid_argument(
        "test degree too high for the available moments (need test + " +
        std::to_string(fdeg) + " <= " + std::to_string(y.degree) + ")");
  }

  const double ti = prob.t_range.lo;
  const double tf = prob.free_final_time ? ti + y.mass() : prob.t_range.hi;
  const int dim = y.dim();
  const int off = 1 + prob.m;

  // Test monomials v = t^i x^k over (t, x).
  const auto vidx = enumerate_indices(1 + prob.n, test_degree);
  double worst = 0.0;
  std::vector<double> zi(dim, 0.0), zf(dim, 0.0);
  zi[0] = ti;
  zf[0] = tf;
  for (int j = 0; j < prob.n; ++j) {
    zi[off + j] = prob.x_init[j];
    zf[off + j] = prob.x_final[j];
  }

  for (const auto& v : vidx) {
    MultiIndex amb(dim, 0);
    amb[0] = v[0];
    for (int j = 0; j < prob.n; ++j) amb[off + j] = v[1 + j];
    const double lhs = monomial_eval(zf, amb) - monomial_eval(zi, amb);

    double rhs = 0.0;
    if (amb[0] > 0) {
      MultiIndex dts = amb;
      const double c = dts[0];
      dts[0] -= 1;
      rhs += c * y.value_at(dts);
    }
    for (int j = 0; j < prob.n; ++j) {
      if (amb[off + j] == 0) continue;
      const double c = amb[off + j];
      MultiIndex base = amb;
      base[off + j] -= 1;
      for (const auto& term : prob.dynamics[j].terms) {
        MultiIndex full = base;
        for (int cidx = 0; cidx < dim; ++cidx) full[cidx] += term.alpha[cidx];
        rhs += c * term.coeff * y.value_at(full);
      }
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double check_invariance_identity(const MomentVector& y, const OcpProblem& prob,
                                 int test_degree) {
  y.validate();
  prob.validate();
  if (!y.coords.same_layout(prob.state_coordinates(), 1e-9)) {
    throw std::invalid_argument(
        "invariance check needs state-only moments matching the problem");
  }
  if (test_degree < 0) throw std::invalid_argument("negative test degree");

  // Work on [-1, 1]^n: x = inv(map)(xs), fs_j(xs) = scale_j * f_j(inv(xs)).
  const AffineMap map = box_affinity(y.coords.box(), unit_box(prob.n));
  const MomentVector ys = rescale_moments(y, map);
  const AffineMap inv = map.inverse();

  // Dynamics as state-only polynomials.
  std::vector<Polynomial> fs(prob.n);
  const int off = 1 + prob.m;
  int fdeg = 1;
  for (int j = 0; j < prob.n; ++j) {
    Polynomial p;
    p.dim = prob.n;
    for (const auto& t : prob.dynamics[j].terms) {
      MultiIndex a(prob.n);
      for (int c = 0; c < prob.n; ++c) a[c] = t.alpha[off + c];
      p.terms.push_back({t.coeff, std::move(a)});
    }
    fs[j] = substitute_affine(p, inv);
    for (auto& t : fs[j].terms) t.coeff *= map.scale[j];
    fdeg = std::max(fdeg, fs[j].degree());
  }
  if (test_degree + fdeg > y.degree) {
    throw std::invalid_argument(
        "test degree too high for the available moments (need test + " +
        std::to_string(fdeg) + " <= " + std::to_string(y.degree) + ")");
  }

  const auto vidx = enumerate_indices(prob.n, test_degree);
  double worst = 0.0;
  for (const auto& v : vidx) {
    double acc = 0.0;
    for (int j = 0; j < prob.n; ++j) {
      if (v[j] == 0) continue;
      MultiIndex base = v;
      const double c = base[j];
      base[j] -= 1;
      for (const auto& term : fs[j].terms) {
        MultiIndex full = base;
        for (int cidx = 0; cidx < prob.n; ++cidx) full[cidx] += term.alpha[cidx];
        acc += c * term.coeff * ys.value_at(full);
      }
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace momrec
