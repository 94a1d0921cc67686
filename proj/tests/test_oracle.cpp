#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "momrec/csv_io.hpp"
#include "momrec/errors.hpp"
#include "momrec/moment_io.hpp"
#include "momrec/occupation.hpp"
#include "momrec/problem_io.hpp"
#include "test_util.hpp"

using namespace momrec;
namespace fs = std::filesystem;

namespace {

// Process following x(t) = t with u = 1 on [0,1]; states are linear, so
// the quadrature sees the exact trajectory.
OcpProblem line_problem() {
  OcpProblem p;
  p.name = "line";
  p.n = 1;
  p.m = 1;
  p.t_range = {0.0, 1.0};
  p.x_box.iv = {{-1.0, 1.0}};
  p.u_box.iv = {{-1.0, 1.0}};
  p.x_init = {0.0};
  p.x_final = {1.0};
  Polynomial f{3, {}}, h{3, {}};
  f.add_term(1.0, {0, 1, 0});
  p.dynamics = {f};
  p.running_cost = h;
  return p;
}

SampledProcess line_process(int samples) {
  SampledProcess proc;
  proc.times.setLinSpaced(samples, 0.0, 1.0);
  proc.states.resize(1, samples);
  proc.controls = Eigen::MatrixXd::Ones(1, samples);
  for (int k = 0; k < samples; ++k) proc.states(0, k) = proc.times[k];
  return proc;
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("momrec_oracle_" + name);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("Gauss-Legendre rules hit the textbook nodes and integrate "
          "polynomials of degree 2n-1 exactly") {
  Eigen::VectorXd nodes, weights;

  gauss_legendre(2, nodes, weights);
  CHECK(nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  gauss_legendre(3, nodes, weights);
  CHECK(nodes[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-13));
  CHECK(weights[2] == doctest::Approx(5.0 / 9.0).epsilon(1e-13));

  for (int n : {2, 4, 8, 16, 64}) {
    gauss_legendre(n, nodes, weights);
    CHECK(weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double got = 0.0;
      for (int i = 0; i < n; ++i) got += weights[i] * std::pow(nodes[i], k);
      const double want = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(got - want) < 1e-13);
    }
  }
}

TEST_CASE("occupation moments of x(t)=t match closed-form integrals") {
  const OcpProblem prob = line_problem();
  const SampledProcess proc = line_process(11);
  const MomentVector y = occupation_moments(proc, prob, 6);

  // Every moment of (t, 1, t) is integral of t^{i+k}, i.e. 1/(i+k+1).
  for (size_t r = 0; r < y.indices.size(); ++r) {
    const auto& a = y.indices[r];
    const double want = 1.0 / (a[0] + a[2] + 1);
    CHECK(y.values[r] == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(y.value_at({1, 0, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  CHECK(y.value_at({0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("occupation moments of the bang-bang optimum match piecewise "
          "integrals") {
  const OcpProblem prob = testfix::double_integrator();
  const SampledProcess proc = testfix::di_process(400);
  QuadratureOptions quad;
  quad.nodes_per_segment = 64;
  const MomentVector y = occupation_moments(proc, prob, 8, quad);

  const double ts = testfix::di_switch_time();
  const double tf = testfix::di_final_time();

  // Mass is the duration.
  CHECK(std::abs(y.value_at({0, 0, 0, 0}) - tf) <= 1e-8 * tf);

  // Control moment: integral of u equals the net velocity change -1.
  CHECK(y.value_at({0, 1, 0, 0}) == doctest::Approx(-1.0).epsilon(1e-4));

  // x2 is piecewise linear, so t*x2 is integrated exactly:
  // phase 1 gives ts^2/2 - ts^3/3; phase 2 has x2 = t - tf.
  const double phase1 = ts * ts / 2.0 - ts * ts * ts / 3.0;
  const double phase2 =
      (tf * tf * tf - ts * ts * ts) / 3.0 - tf * (tf * tf - ts * ts) / 2.0;
  const double want_tx2 = phase1 + phase2;
  CHECK(std::abs(y.value_at({1, 0, 0, 1}) - want_tx2) <=
        1e-8 * std::abs(want_tx2));

  // x1 is quadratic; the piecewise-linear reading converges at O(h^2).
  const double want_x1 = (ts + ts * ts / 2.0 - ts * ts * ts / 6.0) +
                         0.25 * std::sqrt(1.5);
  CHECK(y.value_at({0, 0, 1, 0}) == doctest::Approx(want_x1).epsilon(1e-4));
}

TEST_CASE("occupation moments reject degenerate input") {
  const OcpProblem prob = line_problem();
  SampledProcess proc = line_process(11);
  CHECK_THROWS_AS(occupation_moments(proc, prob, 5),
                  std::invalid_argument);  // odd degree

  SampledProcess one;
  one.times.resize(1);
  one.times << 0.0;
  one.states = Eigen::MatrixXd::Zero(1, 1);
  one.controls = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS(occupation_moments(one, prob, 4));

  SampledProcess bad = line_process(5);
  bad.times[2] = bad.times[1];  // not strictly increasing
  CHECK_THROWS(occupation_moments(bad, prob, 4));
}

TEST_CASE("adjoint identity residual is small on admissible processes and "
          "shrinks with sample count") {
  const OcpProblem di = testfix::double_integrator();

  // Chord controls make the obstacle-problem interpolant exactly
  // admissible: the residual is pure quadrature noise.
  const OcpProblem obs = testfix::obstacle_problem();
  const MomentVector y_obs =
      occupation_moments(testfix::obs_process(801), obs, 8);
  CHECK(check_adjoint_identity(y_obs, obs, 6) <= 1e-8);

  // The double integrator's x1 is quadratic between samples, so the
  // residual decays like h^2.
  double prev = -1.0;
  for (int per_phase : {25, 50, 100, 200}) {
    const MomentVector y =
        occupation_moments(testfix::di_process(per_phase), di, 8);
    const double res = check_adjoint_identity(y, di, 4);
    if (prev >= 0.0) CHECK(res <= 0.5 * prev + 1e-13);
    prev = res;
  }

  const MomentVector y_fine =
      occupation_moments(testfix::di_process(2000), di, 8);
  CHECK(check_adjoint_identity(y_fine, di, 6) <= 1e-4);

  // Degree budget: test degree d needs moments up to d + deg(f).
  CHECK_THROWS_AS(check_adjoint_identity(y_fine, di, 8),
                  std::invalid_argument);
}

TEST_CASE("invariant moments of a contracting flow collapse to the origin") {
  OcpProblem p;
  p.name = "decay";
  p.n = 1;
  p.m = 0;
  p.t_range = {0.0, 1.0};
  p.x_box.iv = {{-2.0, 2.0}};
  Polynomial f{2, {}};
  f.add_term(-1.0, {0, 1});  // dx/dt = -x
  p.dynamics = {f};
  p.running_cost = Polynomial{2, {}};

  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const MomentVector y = invariant_moments(p, x0, 200.0, 40.0, 4);
  CHECK(y.value_at({0}) == 1.0);  // normalization is exact
  for (size_t r = 0; r < y.indices.size(); ++r) {
    if (index_degree(y.indices[r]) >= 1) CHECK(std::abs(y.values[r]) <= 1e-6);
  }
}

TEST_CASE("invariant moments reject bad horizons and escaping flows") {
  OcpProblem p;
  p.name = "blowup";
  p.n = 1;
  p.m = 0;
  p.t_range = {0.0, 1.0};
  p.x_box.iv = {{-0.5, 0.5}};
  Polynomial f{2, {}};
  f.add_term(1.0, {0, 1});  // dx/dt = x, unstable
  p.dynamics = {f};
  p.running_cost = Polynomial{2, {}};

  Eigen::VectorXd x0(1);
  x0 << 0.4;
  CHECK_THROWS_AS(invariant_moments(p, x0, 10.0, 20.0, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(invariant_moments(p, x0, 10.0, 2.0, 4), NumericalError);
}

TEST_CASE("Van der Pol long-run moments are insensitive to the start point "
          "and satisfy the flow identity") {
  const OcpProblem p = testfix::vdp_problem();
  Eigen::VectorXd a(2), b(2);
  a << 2.0, 0.0;
  b << -1.0, 1.0;
  const MomentVector ya = invariant_moments(p, a, 3000.0, 600.0, 8, 2e-3);
  const MomentVector yb = invariant_moments(p, b, 3000.0, 600.0, 8, 2e-3);

  CHECK(ya.value_at({0, 0}) == 1.0);
  CHECK(yb.value_at({0, 0}) == 1.0);

  // Compare on the unit box so every moment carries comparable scale.
  const AffineMap to_unit = box_affinity(ya.coords.box(), unit_box(2));
  const MomentVector sa = rescale_moments(ya, to_unit);
  const MomentVector sb = rescale_moments(yb, to_unit);
  double worst = 0.0;
  for (size_t r = 0; r < sa.indices.size(); ++r) {
    worst = std::max(worst, std::abs(sa.values[r] - sb.values[r]));
  }
  CHECK(worst <= 1e-2);

  CHECK(check_invariance_identity(ya, p, 5) <= 1e-2);
}

TEST_CASE("moment files round-trip bitwise") {
  const OcpProblem prob = testfix::double_integrator();
  MomentVector y = occupation_moments(testfix::di_process(40), prob, 4);
  y.source = "oracle";
  y.problem_name = "doubleint";

  const fs::path path = temp_file("roundtrip.mom");
  save_moments(y, path);
  const MomentVector z = load_moments(path);

  REQUIRE(z.indices.size() == y.indices.size());
  CHECK(z.degree == y.degree);
  CHECK(z.source == y.source);
  CHECK(z.problem_name == y.problem_name);
  CHECK(z.coords.dim() == y.coords.dim());
  for (int c = 0; c < y.coords.dim(); ++c) {
    CHECK(z.coords.coords[c].kind == y.coords.coords[c].kind);
    CHECK(z.coords.coords[c].range.lo == y.coords.coords[c].range.lo);
    CHECK(z.coords.coords[c].range.hi == y.coords.coords[c].range.hi);
  }
  for (size_t r = 0; r < y.indices.size(); ++r) {
    CHECK(z.indices[r] == y.indices[r]);
    CHECK(z.values[r] == y.values[r]);  // bitwise
  }
  fs::remove(path);
}

TEST_CASE("moment file loader rejects malformed inputs") {
  const std::string header =
      "dims 1 0\ndegree 2\nbox t 0 1\nbox x1 -1 1\nsource oracle\n";

  auto expect_throw = [](const std::string& name, const std::string& text,
                         const std::string& needle) {
    const fs::path path = temp_file(name);
    write_text(path, text);
    try {
      load_moments(path);
      FAIL_CHECK("no error for " << name);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    e.what());
    }
    fs::remove(path);
  };

  expect_throw("dup.mom",
               header + "y 0 0 1.0\ny 0 0 2.0\ny 1 0 0.5\ny 0 1 0.5\n"
                        "y 2 0 0.3\ny 1 1 0.2\ny 0 2 0.3\n",
               "duplicate");
  expect_throw("odd.mom", "dims 1 0\ndegree 3\nbox t 0 1\nbox x1 -1 1\n",
               "even");
  expect_throw("missing.mom", header + "y 0 0 1.0\ny 1 0 0.5\n", "missing");
  expect_throw("outside.mom",
               header + "y 3 0 1.0\ny 0 0 1.0\n", "degree");
  expect_throw("early.mom", "dims 1 0\ndegree 2\ny 0 0 1.0\n", "before");
  expect_throw("nofile.mom", "", "");

  // Unknown header keys are tolerated.
  const fs::path ok = temp_file("unknown.mom");
  write_text(ok, "comment hello\n" + header +
                     "y 0 0 1.0\ny 1 0 0.5\ny 0 1 0.5\n"
                     "y 2 0 0.3\ny 1 1 0.2\ny 0 2 0.3\n");
  CHECK(load_moments(ok).value_at({1, 1}) == 0.2);
  fs::remove(ok);
}

TEST_CASE("problem files parse to the expected problem") {
  const OcpProblem p =
      load_problem(fs::path(MOMREC_PROBLEMS_DIR) / "doubleint.prob");

  CHECK(p.name == "doubleint");
  CHECK(p.n == 2);
  CHECK(p.m == 1);
  CHECK(p.free_final_time);
  CHECK(p.t_range.hi == 5.0);
  CHECK(p.x_box.iv[0].lo == -2.0);
  CHECK(p.u_box.iv[0].hi == 1.0);
  REQUIRE(p.x_init.size() == 2);
  CHECK(p.x_init[0] == 1.0);
  CHECK(p.x_final[1] == 0.0);

  // Dynamics evaluate like the fixture's at a probe point.
  const OcpProblem ref = testfix::double_integrator();
  const std::vector<double> z = {0.3, -0.7, 1.1, 0.4};
  for (int j = 0; j < 2; ++j) {
    CHECK(p.dynamics[j].eval(z) == ref.dynamics[j].eval(z));
  }
  CHECK(p.running_cost.eval(z) == 1.0);
}

TEST_CASE("problem file loader reports errors with file and line") {
  auto expect_throw = [](const std::string& name, const std::string& text,
                         const std::string& needle) {
    const fs::path path = temp_file(name);
    write_text(path, text);
    try {
      load_problem(path);
      FAIL_CHECK("no error for " << name);
    } catch (const ParseError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    e.what());
    }
    fs::remove(path);
  };

  const std::string base =
      "dims 1 0\ntbox 0 1\nxbox 1 -1 1\n";
  expect_throw("nodyn.prob", base, "missing dynamics");
  expect_throw("unknown.prob", base + "frobnicate 3\n", "unknown keyword");
  expect_throw("arity.prob",
               base + "dynamics 1\nterm 1 0\nend\n", "exponents");
  expect_throw("dupdyn.prob",
               base + "dynamics 1\nend\ndynamics 1\nend\n",
               "duplicate dynamics");
  expect_throw("open.prob", base + "dynamics 1\nterm 1 0 1\n",
               "unterminated");
  expect_throw("nobox.prob",
               "dims 2 0\ntbox 0 1\nxbox 1 -1 1\n"
               "dynamics 1\nend\ndynamics 2\nend\n",
               "missing xbox");
}

TEST_CASE("CSV writers round-trip through their own readers") {
  const OcpProblem prob = testfix::double_integrator();
  const SampledProcess proc = testfix::di_process(25);

  const fs::path tpath = temp_file("traj.csv");
  write_trajectory_csv(tpath, proc);
  const SampledProcess back = read_trajectory_csv(tpath, prob);
  REQUIRE(back.samples() == proc.samples());
  for (int k = 0; k < proc.samples(); ++k) {
    CHECK(back.times[k] == proc.times[k]);
    CHECK(back.states(0, k) == proc.states(0, k));
    CHECK(back.states(1, k) == proc.states(1, k));
    CHECK(back.controls(0, k) == proc.controls(0, k));
  }
  fs::remove(tpath);

  CoordinateSeries s;
  s.kind = CoordKind::State;
  s.ordinal = 2;
  s.label = "x2";
  s.way_points = {{0.0, 1.0, 0.5}, {0.25, 0.75, 0.25}, {1.0, -0.3, 0.25}};
  const fs::path spath = temp_file("series.csv");
  write_series_csv(spath, s);
  const CoordinateSeries sback = read_series_csv(spath);
  CHECK(sback.label == "x2");
  CHECK(sback.kind == CoordKind::State);
  CHECK(sback.ordinal == 2);
  REQUIRE(sback.way_points.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(sback.way_points[k].time == s.way_points[k].time);
    CHECK(sback.way_points[k].value == s.way_points[k].value);
    CHECK(sback.way_points[k].weight == s.way_points[k].weight);
  }
  fs::remove(spath);

  const fs::path corrupt = temp_file("corrupt.csv");
  write_text(corrupt, "time,x1,u1\n0.0,zzz,0.1\n");
  CHECK_THROWS_AS(read_trajectory_csv(corrupt, line_problem()), ParseError);
  fs::remove(corrupt);
}
