#include <cmath>
#include <limits>

#include "momrec/kernels.hpp"
#include "momrec/lp.hpp"
#include "momrec/lp_internal.hpp"

namespace momrec::lp {

namespace {

// Largest alpha in (0, 1] with v + alpha * dv >= (1 - ...) kept positive.
double step_length(const Eigen::VectorXd& v, const Eigen::VectorXd& dv,
                   double eta) {
  double alpha = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -eta * v[i] / dv[i]);
  }
  return alpha;
}

// Mehrotra's heuristic start from two least-squares solves; strictly
// positive by construction, no caller input.
void starting_point(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                    const Eigen::VectorXd& c, Eigen::VectorXd& x,
                    Eigen::VectorXd& y, Eigen::VectorXd& s) {
  const int n = static_cast<int>(a.cols());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.cols());
  Eigen::MatrixXd m = kernels::scaled_gram(a, ones);
  const double reg = 1e-12 * (1.0 + m.diagonal().cwiseAbs().maxCoeff());
  m.diagonal().array() += reg;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  x = a.transpose() * ldlt.solve(b);
  y = ldlt.solve(a * c);
  s = c - a.transpose() * y;

  const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
  const double ds = std::max(-1.5 * s.minCoeff(), 0.0);
  Eigen::VectorXd xh = x.array() + dx;
  Eigen::VectorXd sh = s.array() + ds;
  const double dot = xh.dot(sh);
  double dxh, dsh;
  if (dot <= 0.0 || xh.sum() <= 0.0 || sh.sum() <= 0.0) {
    dxh = dsh = 1.0;
  } else {
    dxh = 0.5 * dot / sh.sum();
    dsh = 0.5 * dot / xh.sum();
  }
  x = xh.array() + dxh;
  s = sh.array() + dsh;
  for (int j = 0; j < n; ++j) {
    x[j] = std::max(x[j], 1e-10);
    s[j] = std::max(s[j], 1e-10);
  }
}

}  // namespace

LpSolution solve_ipm(const LpStandardForm& lp_in, const IpmOptions& opts) {
  lp_in.validate();
  const FreeSplit fs = split_free(lp_in);
  const RowCleanup rc = remove_dependent_rows(fs.lp.a, fs.lp.b);

  LpSolution sol;
  const int n_orig = lp_in.cols();
  auto pack = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    sol.primal = fs.merge(x, n_orig);
    sol.dual = Eigen::VectorXd::Zero(lp_in.rows());
    for (size_t i = 0; i < rc.kept.size(); ++i) sol.dual[rc.kept[i]] = y[i];
    finish_solution(lp_in, sol);
  };

  if (!rc.consistent) {
    sol.status = LpStatus::Infeasible;
    pack(Eigen::VectorXd::Zero(fs.lp.cols()),
         Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rc.kept.size())));
    return sol;
  }

  const Eigen::MatrixXd& a = rc.a;
  const Eigen::VectorXd& b = rc.b;
  const Eigen::VectorXd& c = fs.lp.c;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  if (m == 0) {
    // No constraints left: the optimum is at the origin unless some cost
    // coefficient points below it.
    const bool bounded = (c.array() >= 0.0).all();
    sol.status = bounded ? LpStatus::Optimal : LpStatus::Unbounded;
    pack(Eigen::VectorXd::Zero(n), Eigen::VectorXd());
    return sol;
  }

  Eigen::VectorXd x, y, s;
  starting_point(a, b, c, x, y, s);

  const double norm_b = b.lpNorm<Eigen::Infinity>();
  const double norm_c = c.lpNorm<Eigen::Infinity>();
  const double eta = 0.9995;

  // Once mu falls far below the feasibility residuals the scaled normal
  // matrix turns numerically singular and iterates start to oscillate, so
  // keep the most accurate iterate seen and stop when it stops improving.
  double merit_best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x_best = x, y_best = y;
  int iter_best = 0;
  constexpr int kStallWindow = 30;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const Eigen::VectorXd r_b = a * x - b;
    const Eigen::VectorXd r_c = a.transpose() * y + s - c;
    const double mu = x.dot(s) / n;
    const double pobj = c.dot(x);
    const double dobj = b.dot(y);
    const double rp = r_b.lpNorm<Eigen::Infinity>() / (1.0 + norm_b);
    const double rd = r_c.lpNorm<Eigen::Infinity>() / (1.0 + norm_c);
    const double rg = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    if (opts.on_iterate) {
      LpIterate it;
      it.iteration = iter;
      it.x = x;
      it.y = y;
      it.s = s;
      it.primal_obj = pobj;
      it.dual_obj = dobj;
      it.mu = mu;
      it.primal_residual = rp;
      it.dual_residual = rd;
      opts.on_iterate(it);
    }

    sol.iterations = iter;
    const double merit = std::max({rp, rd, rg});
    if (merit < merit_best) {
      merit_best = merit;
      x_best = x;
      y_best = y;
      iter_best = iter;
    }
    if (merit_best <= opts.tol) break;
    if (iter - iter_best >= kStallWindow) break;
    if (y.lpNorm<Eigen::Infinity>() > 1e10 * (1.0 + norm_c)) {
      sol.status = LpStatus::Infeasible;
      pack(x, y);
      return sol;
    }
    if (x.lpNorm<Eigen::Infinity>() > 1e10 * (1.0 + norm_b)) {
      sol.status = LpStatus::Unbounded;
      pack(x, y);
      return sol;
    }

    const Eigen::VectorXd d = x.cwiseQuotient(s);
    const Eigen::MatrixXd nm = kernels::scaled_gram(a, d);
    Eigen::MatrixXd nm_reg = nm;
    const double reg = 1e-12 * (1.0 + nm.diagonal().cwiseAbs().maxCoeff());
    nm_reg.diagonal().array() += reg;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(nm_reg);

    // Refine against the unregularized matrix; two rounds recover most of
    // the accuracy the regularization and ill conditioning cost.
    auto nsolve = [&](const Eigen::VectorXd& rhs) {
      Eigen::VectorXd v = ldlt.solve(rhs);
      for (int round = 0; round < 2; ++round) {
        const Eigen::VectorXd res = rhs - nm * v;
        if (!res.allFinite()) break;
        v += ldlt.solve(res);
      }
      return v;
    };

    auto solve_step = [&](const Eigen::VectorXd& rxs, Eigen::VectorXd& dx,
                          Eigen::VectorXd& dy, Eigen::VectorXd& ds) {
      const Eigen::VectorXd rhs =
          -r_b - a * (rxs.cwiseQuotient(s) + d.cwiseProduct(r_c));
      dy = nsolve(rhs);
      ds = -r_c - a.transpose() * dy;
      dx = (rxs - x.cwiseProduct(ds)).cwiseQuotient(s);
    };

    // Predictor.
    Eigen::VectorXd dx_aff, dy_aff, ds_aff;
    solve_step(-x.cwiseProduct(s), dx_aff, dy_aff, ds_aff);
    const double ap_aff = step_length(x, dx_aff, 1.0);
    const double ad_aff = step_length(s, ds_aff, 1.0);
    const double mu_aff =
        (x + ap_aff * dx_aff).dot(s + ad_aff * ds_aff) / n;
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::min(1.0, std::max(0.0, sigma));

    // Corrector.
    Eigen::VectorXd rxs = -x.cwiseProduct(s) - dx_aff.cwiseProduct(ds_aff);
    rxs.array() += sigma * mu;
    Eigen::VectorXd dx, dy, ds;
    solve_step(rxs, dx, dy, ds);

    if (!dx.allFinite() || !dy.allFinite() || !ds.allFinite()) break;

    const double ap = step_length(x, dx, eta);
    const double ad = step_length(s, ds, eta);
    x += ap * dx;
    y += ad * dy;
    s += ad * ds;
    for (int j = 0; j < n; ++j) {
      x[j] = std::max(x[j], 1e-300);
      s[j] = std::max(s[j], 1e-300);
    }
  }

  sol.status =
      merit_best <= opts.tol ? LpStatus::Optimal : LpStatus::IterationLimit;
  pack(x_best, y_best);
  return sol;
}

}  // namespace momrec::lp
