#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "momrec/lp.hpp"

using namespace momrec;

namespace {

lp::LpStandardForm min_x_geq_1() {
  // min x s.t. x - s = 1, x,s >= 0.
  lp::LpStandardForm p;
  p.c.resize(2);
  p.c << 1.0, 0.0;
  p.a.resize(1, 2);
  p.a << 1.0, -1.0;
  p.b.resize(1);
  p.b << 1.0;
  return p;
}

lp::LpStandardForm one_atom_fit() {
  // min lambda s.t. w + lambda - s1 = 0.5, w - lambda + s2 = 0.5.
  lp::LpStandardForm p;
  p.c = Eigen::VectorXd::Zero(4);
  p.c[1] = 1.0;
  p.a.resize(2, 4);
  p.a << 1.0, 1.0, -1.0, 0.0,  //
      1.0, -1.0, 0.0, 1.0;
  p.b.resize(2);
  p.b << 0.5, 0.5;
  return p;
}

lp::LpStandardForm infeasible_box() {
  // x - s1 = 1 (x >= 1) and x + s2 = 0 (x <= 0).
  lp::LpStandardForm p;
  p.c = Eigen::VectorXd::Zero(3);
  p.c[0] = 1.0;
  p.a.resize(2, 3);
  p.a << 1.0, -1.0, 0.0,  //
      1.0, 0.0, 1.0;
  p.b.resize(2);
  p.b << 1.0, 0.0;
  return p;
}

// Feasible primal and dual by construction, so an optimum exists.
lp::LpStandardForm random_instance(std::mt19937& rng) {
  std::uniform_int_distribution<int> um(2, 25), un_extra(1, 15);
  const int m = um(rng);
  const int n = std::min(40, m + un_extra(rng));
  std::uniform_real_distribution<double> ua(-1.0, 1.0), ux(0.0, 2.0),
      us(0.1, 2.0), uy(-1.0, 1.0);
  lp::LpStandardForm p;
  p.a.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.a(i, j) = ua(rng);
  }
  Eigen::VectorXd x0(n), s0(n), y0(m);
  for (int j = 0; j < n; ++j) {
    x0[j] = ux(rng);
    s0[j] = us(rng);
  }
  for (int i = 0; i < m; ++i) y0[i] = uy(rng);
  p.b = p.a * x0;
  p.c = p.a.transpose() * y0 + s0;
  return p;
}

}  // namespace

TEST_CASE("interior point solves the two pinned examples") {
  auto p1 = min_x_geq_1();
  const auto s1 = lp::solve_ipm(p1);
  REQUIRE(s1.status == lp::LpStatus::Optimal);
  CHECK(s1.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s1.primal[0] == doctest::Approx(1.0).epsilon(1e-6));

  auto p2 = one_atom_fit();
  const auto s2 = lp::solve_ipm(p2);
  REQUIRE(s2.status == lp::LpStatus::Optimal);
  CHECK(std::abs(s2.objective) < 1e-7);
  CHECK(s2.primal[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("simplex solves the same examples exactly") {
  auto p1 = min_x_geq_1();
  const auto s1 = lp::solve_simplex_reference(p1);
  REQUIRE(s1.status == lp::LpStatus::Optimal);
  CHECK(s1.objective == doctest::Approx(1.0).epsilon(1e-12));

  auto p2 = one_atom_fit();
  const auto s2 = lp::solve_simplex_reference(p2);
  REQUIRE(s2.status == lp::LpStatus::Optimal);
  CHECK(std::abs(s2.objective) < 1e-12);
  CHECK(s2.primal[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("infeasible instance is classified by both solvers") {
  auto p = infeasible_box();
  CHECK(lp::solve_simplex_reference(p).status == lp::LpStatus::Infeasible);
  CHECK(lp::solve_ipm(p).status == lp::LpStatus::Infeasible);
}

TEST_CASE("unbounded instance is classified by both solvers") {
  lp::LpStandardForm p;
  p.c.resize(2);
  p.c << -1.0, 0.0;
  p.a.resize(1, 2);
  p.a << 1.0, -1.0;
  p.b.resize(1);
  p.b << 0.0;
  CHECK(lp::solve_simplex_reference(p).status == lp::LpStatus::Unbounded);
  CHECK(lp::solve_ipm(p).status == lp::LpStatus::Unbounded);
}

TEST_CASE("duplicated equality rows are cleaned up and solved") {
  lp::LpStandardForm p;
  p.c.resize(2);
  p.c << 1.0, 0.0;
  p.a.resize(2, 2);
  p.a << 1.0, 1.0,  //
      1.0, 1.0;
  p.b.resize(2);
  p.b << 1.0, 1.0;
  const auto ss = lp::solve_simplex_reference(p);
  REQUIRE(ss.status == lp::LpStatus::Optimal);
  CHECK(std::abs(ss.objective) < 1e-12);
  const auto si = lp::solve_ipm(p);
  REQUIRE(si.status == lp::LpStatus::Optimal);
  CHECK(std::abs(si.objective) < 1e-7);

  // Contradictory duplicate is infeasible.
  p.b[1] = 2.0;
  CHECK(lp::solve_simplex_reference(p).status == lp::LpStatus::Infeasible);
  CHECK(lp::solve_ipm(p).status == lp::LpStatus::Infeasible);
}

TEST_CASE("row cleanup keeps an independent subset and flags contradictions") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(5, 8);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 8; ++j) a(i, j) = u(rng);
  }
  a.row(4) = a.row(0) + 2.0 * a.row(1);
  Eigen::VectorXd x(8);
  for (int j = 0; j < 8; ++j) x[j] = u(rng);
  Eigen::VectorXd b = a * x;

  const auto rc = lp::remove_dependent_rows(a, b);
  CHECK(rc.consistent);
  CHECK(rc.kept.size() == 4);
  CHECK(rc.a.rows() == 4);

  Eigen::VectorXd bad = b;
  bad[4] += 1.0;
  CHECK_FALSE(lp::remove_dependent_rows(a, bad).consistent);
}

TEST_CASE("free variables reach negative optima") {
  // min t s.t. t >= -3, t free.
  lp::LpStandardForm p;
  p.c.resize(2);
  p.c << 1.0, 0.0;
  p.a.resize(1, 2);
  p.a << 1.0, -1.0;
  p.b.resize(1);
  p.b << -3.0;
  p.is_free = {1, 0};
  const auto ss = lp::solve_simplex_reference(p);
  REQUIRE(ss.status == lp::LpStatus::Optimal);
  CHECK(ss.objective == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(ss.primal[0] == doctest::Approx(-3.0).epsilon(1e-12));
  const auto si = lp::solve_ipm(p);
  REQUIRE(si.status == lp::LpStatus::Optimal);
  CHECK(si.objective == doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("iteration limit is reported, not silently absorbed") {
  lp::IpmOptions opts;
  opts.max_iter = 1;
  auto p = one_atom_fit();
  const auto s = lp::solve_ipm(p, opts);
  CHECK(s.status == lp::LpStatus::IterationLimit);
  CHECK(s.iterations == 1);
}

TEST_CASE("random suite: objectives agree and KKT residuals are small") {
  std::mt19937 rng(2024);
  // Termination is relative; at objective magnitudes near 50 the default
  // 1e-8 would leave a few 1e-7 of slack, so tighten for the comparison.
  lp::IpmOptions tight;
  tight.tol = 1e-9;
  for (int inst = 0; inst < 50; ++inst) {
    const auto p = random_instance(rng);
    const auto si = lp::solve_ipm(p, tight);
    const auto ss = lp::solve_simplex_reference(p);
    REQUIRE_MESSAGE(si.status == lp::LpStatus::Optimal,
                    "instance " << inst << " ipm " << lp::to_string(si.status));
    REQUIRE_MESSAGE(ss.status == lp::LpStatus::Optimal,
                    "instance " << inst << " simplex "
                                << lp::to_string(ss.status));
    CHECK_MESSAGE(std::abs(si.objective - ss.objective) < 1e-7,
                  "instance " << inst << ": ipm " << si.objective
                              << " simplex " << ss.objective);
    CHECK(si.primal_residual <= 1e-9);
    CHECK(si.dual_residual <= 1e-9);
    CHECK(si.gap <= 1e-9);
    CHECK(si.primal.minCoeff() >= -1e-9);
  }
}

TEST_CASE("weak duality holds on near-feasible iterates") {
  std::mt19937 rng(99);
  const auto p = random_instance(rng);
  int checked = 0;
  lp::IpmOptions opts;
  opts.on_iterate = [&](const lp::LpIterate& it) {
    // With infeasible-start iterates the duality statement holds once the
    // equality residuals are resolved; gate on that.
    if (it.primal_residual <= 1e-9 && it.dual_residual <= 1e-9) {
      ++checked;
      const double scale = 1.0 + std::abs(it.primal_obj) + std::abs(it.dual_obj);
      CHECK(it.primal_obj - it.dual_obj >= -1e-12 * scale);
    }
  };
  const auto s = lp::solve_ipm(p, opts);
  REQUIRE(s.status == lp::LpStatus::Optimal);
  CHECK(checked > 0);
}

TEST_CASE("solver rejects malformed problems") {
  lp::LpStandardForm p = min_x_geq_1();
  p.b.resize(2);
  p.b << 1.0, 2.0;
  CHECK_THROWS_AS(lp::solve_ipm(p), std::invalid_argument);
  p = min_x_geq_1();
  p.c[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(lp::solve_simplex_reference(p), std::invalid_argument);
}
