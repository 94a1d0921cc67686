// Command-line front end: moment generation, atomic reconstruction,
// shooting refinement, and certification, individually or as a pipeline.
// Exit codes: 0 success, 2 usage, 3 parse failure, 4 numerical failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momrec/atomic_fit.hpp"
#include "momrec/csv_io.hpp"
#include "momrec/errors.hpp"
#include "momrec/grid.hpp"
#include "momrec/moment_io.hpp"
#include "momrec/occupation.hpp"
#include "momrec/problem_io.hpp"
#include "momrec/series.hpp"
#include "momrec/shooting.hpp"

namespace fs = std::filesystem;
using namespace momrec;

namespace {

// Full-precision prints keep reruns byte-identical and parseable.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct MomentsArgs {
  std::string spec;
  std::string trajectory;
  bool invariant = false;
  std::vector<double> x0;
  double horizon = 3000.0;
  double burn_in = 600.0;
  double dt = 2e-3;
  int degree = 8;
  int nodes = 8;
  std::string out_dir = ".";
};

struct ReconstructArgs {
  std::string spec;
  std::string moments;
  int grid_t = 101;
  int grid_coord = 101;
  double threshold = 1e-3;
  int time_samples = 401;
  bool joint_grid = false;
  std::string out_dir = ".";
};

struct RefineArgs {
  std::string spec;
  std::string assembled;
  int segments = 40;
  double relaxation_cost = 0.0;
  bool has_relaxation_cost = false;
  double tol_cert = 1e-2;
  std::string out_dir = ".";
};

fs::path run_moments(const MomentsArgs& a) {
  const OcpProblem prob = load_problem(a.spec);
  MomentVector y;
  if (a.invariant) {
    if (a.x0.empty()) {
      throw std::invalid_argument("--invariant needs --x0 <v1,...,vn>");
    }
    const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(
        a.x0.data(), static_cast<Eigen::Index>(a.x0.size()));
    y = invariant_moments(prob, x0, a.horizon, a.burn_in, a.degree, a.dt);
  } else {
    if (a.trajectory.empty()) {
      throw std::invalid_argument("moments needs --trajectory or --invariant");
    }
    const SampledProcess proc = read_trajectory_csv(a.trajectory, prob);
    QuadratureOptions quad;
    quad.nodes_per_segment = a.nodes;
    y = occupation_moments(proc, prob, a.degree, quad);
  }

  fs::create_directories(a.out_dir);
  const fs::path out = fs::path(a.out_dir) / "moments.txt";
  save_moments(y, out);

  std::cout << "problem " << prob.name << "\n";
  std::cout << "moments " << y.values.size() << "\n";
  std::cout << "y0 " << num(y.mass()) << "\n";
  int fdeg = 1;
  for (const auto& f : prob.dynamics) fdeg = std::max(fdeg, f.degree());
  const int test_degree = std::min(6, a.degree - fdeg);
  if (test_degree >= 1) {
    if (a.invariant) {
      std::cout << "invariance_residual "
                << num(check_invariance_identity(y, prob, test_degree))
                << "\n";
    } else if (prob.has_endpoints()) {
      std::cout << "adjoint_residual "
                << num(check_adjoint_identity(y, prob, test_degree)) << "\n";
    }
  }
  std::cout << "wrote " << out.string() << "\n";
  return out;
}

fs::path run_reconstruct(const ReconstructArgs& a) {
  const OcpProblem prob = load_problem(a.spec);
  const MomentVector y = load_moments(a.moments);
  if (y.coords.n_states() != prob.n || y.coords.m_controls() != prob.m) {
    throw std::invalid_argument(
        "moment file layout (" + std::to_string(y.coords.n_states()) +
        " states, " + std::to_string(y.coords.m_controls()) +
        " controls) does not match problem '" + prob.name + "' (" +
        std::to_string(prob.n) + ", " + std::to_string(prob.m) + ")");
  }
  fs::create_directories(a.out_dir);

  if (a.joint_grid) {
    // Support of the measure on the joint state grid; no time series.
    std::vector<int> pos;
    for (int i = 0; i < y.coords.dim(); ++i) {
      if (y.coords.coords[i].kind == CoordKind::State) pos.push_back(i);
    }
    if (pos.empty()) throw std::invalid_argument("no state coordinates");
    const MomentVector ys = restrict_moments(y, pos);
    const Grid grid =
        build_grid(ys.coords, std::vector<int>(ys.coords.dim(), a.grid_coord));
    FitOptions fit;
    const AtomicMeasure mu = fit_atomic(ys, grid, fit);
    const SupportExtraction sup = extract_support(mu, a.threshold);
    const fs::path out = fs::path(a.out_dir) / "support.csv";
    write_atoms_csv(out, sup.measure);
    std::cout << "support atoms " << sup.measure.size() << " lambda "
              << num(mu.fit_error) << " retained "
              << num(sup.retained_mass_fraction) << "\n";
    std::cout << "wrote " << out.string() << "\n";
    return out;
  }

  if (!y.coords.has_time()) {
    throw std::invalid_argument(
        "moment file has no time coordinate; use --joint-grid for support "
        "extraction");
  }

  ReconstructOptions opts;
  opts.grid_time = a.grid_t;
  opts.grid_coord = a.grid_coord;
  opts.threshold = a.threshold;
  std::vector<CoordinateSeries> series;
  for (int i = 0; i < y.coords.dim(); ++i) {
    if (y.coords.coords[i].kind == CoordKind::Time) continue;
    const std::string label = y.coords.coords[i].label();
    try {
      series.push_back(reconstruct_coordinate(y, i, opts));
    } catch (const NumericalError& e) {
      throw NumericalError("coordinate " + label + ": " + e.what());
    }
    const CoordinateSeries& s = series.back();
    std::cout << "series " << s.label << " lambda " << num(s.fit_error)
              << " retained " << num(s.retained_mass_fraction)
              << " waypoints " << s.way_points.size() << " multimodal "
              << s.multimodal.size() << "\n";
    const fs::path out = fs::path(a.out_dir) / ("series_" + s.label + ".csv");
    write_series_csv(out, s);
    std::cout << "wrote " << out.string() << "\n";
  }

  // The occupation measure's mass is the duration.
  const double duration = y.mass();
  const ReconstructedProcess rec =
      assemble_process(prob, series, duration, a.time_samples);
  const fs::path out = fs::path(a.out_dir) / "assembled.csv";
  write_trajectory_csv(out, rec.assembled);
  std::cout << "assembled samples " << rec.assembled.samples() << " duration "
            << num(rec.duration) << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return out;
}

int run_refine(const RefineArgs& a) {
  const OcpProblem prob = load_problem(a.spec);
  const SampledProcess init = read_trajectory_csv(a.assembled, prob);
  RefineOptions opts;
  opts.segments = a.segments;
  const RefinementResult rr = local_optimize(prob, init, opts);

  fs::create_directories(a.out_dir);
  SampledProcess refined;
  refined.times = rr.trajectory.times;
  refined.states = rr.trajectory.states;
  refined.controls = rr.trajectory.controls;
  const fs::path out = fs::path(a.out_dir) / "refined.csv";
  write_trajectory_csv(out, refined);

  std::cout << "cost " << num(rr.cost) << "\n";
  std::cout << "duration " << num(rr.control.duration) << "\n";
  std::cout << "terminal_violation " << num(rr.terminal_violation) << "\n";
  std::cout << "path_violation " << num(rr.path_violation) << "\n";
  std::cout << "converged " << (rr.converged ? 1 : 0) << "\n";
  std::cout << "iterations " << rr.iterations << "\n";
  std::cout << "wrote " << out.string() << "\n";
  if (a.has_relaxation_cost) {
    const Certification cert =
        certify_global(rr.cost, a.relaxation_cost, a.tol_cert);
    if (cert.certified) {
      std::cout << "CERTIFIED\n";
    } else {
      std::cout << "NOT-CERTIFIED gap=" << num(cert.gap) << "\n";
    }
  }
  if (!rr.converged) {
    std::cerr << "refinement did not converge; best iterate written\n";
    return 4;
  }
  return 0;
}

int code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 3;
  if (dynamic_cast<const NumericalError*>(&e)) return 4;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
  return 4;
}

int run_pipeline(const MomentsArgs& ma, ReconstructArgs ra, RefineArgs fa) {
  {
    const OcpProblem prob = load_problem(ma.spec);
    if (!prob.has_endpoints()) {
      throw std::invalid_argument(
          "pipeline needs endpoint conditions; run moments/reconstruct "
          "directly for invariant-measure problems");
    }
  }
  const char* stage = "moments";
  try {
    std::cout << "== moments ==\n";
    const fs::path momfile = run_moments(ma);
    stage = "reconstruct";
    std::cout << "== reconstruct ==\n";
    ra.moments = momfile.string();
    const fs::path assembled = run_reconstruct(ra);
    stage = "refine";
    std::cout << "== refine ==\n";
    fa.assembled = assembled.string();
    const int rc = run_refine(fa);
    if (rc != 0) throw NumericalError("refinement did not converge");
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "pipeline failed at stage " << stage << ": " << e.what()
              << "\n";
    return code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Reconstructs trajectories and controls from occupation-measure "
      "moments, refines them by direct shooting, and certifies costs "
      "against relaxation bounds."};
  app.require_subcommand(1);

  MomentsArgs ma;
  ReconstructArgs ra;
  RefineArgs fa;

  const auto add_moment_flags = [&](CLI::App* c) {
    c->add_option("spec", ma.spec, "problem description file")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--trajectory", ma.trajectory,
                  "sampled process CSV (time,x...,u...)")
        ->check(CLI::ExistingFile);
    c->add_option("--degree", ma.degree, "moment truncation degree 2r");
    c->add_option("--nodes", ma.nodes, "quadrature nodes per sample interval");
    c->add_option("--out-dir", ma.out_dir, "output directory");
  };
  const auto add_invariant_flags = [&](CLI::App* c) {
    c->add_flag("--invariant", ma.invariant,
                "long-run moments of the autonomous flow instead of a "
                "trajectory's occupation");
    c->add_option("--x0", ma.x0, "initial state for --invariant")
        ->delimiter(',');
    c->add_option("--horizon", ma.horizon, "integration horizon");
    c->add_option("--burn-in", ma.burn_in, "transient to discard");
    c->add_option("--dt", ma.dt, "integration step");
  };
  const auto add_reconstruct_flags = [&](CLI::App* c) {
    c->add_option("--grid-t", ra.grid_t, "time grid points");
    c->add_option("--grid-coord", ra.grid_coord, "coordinate grid points");
    c->add_option("--threshold", ra.threshold, "atom weight threshold");
    c->add_option("--time-samples", ra.time_samples,
                  "samples in the assembled process");
    c->add_flag("--joint-grid", ra.joint_grid,
                "fit on the joint state grid and emit support atoms only");
  };
  const auto add_refine_flags = [&](CLI::App* c) {
    c->add_option("--segments", fa.segments, "shooting control segments");
    c->add_option("--relaxation-cost", fa.relaxation_cost,
                  "lower bound to certify the refined cost against");
    c->add_option("--tol-cert", fa.tol_cert, "certification gap tolerance");
  };

  CLI::App* cmd_moments =
      app.add_subcommand("moments", "moments of a process or invariant flow");
  add_moment_flags(cmd_moments);
  add_invariant_flags(cmd_moments);

  CLI::App* cmd_reconstruct = app.add_subcommand(
      "reconstruct", "atomic fit and way-point series from a moment file");
  cmd_reconstruct->add_option("spec", ra.spec, "problem description file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_reconstruct->add_option("moments", ra.moments, "moment file")
      ->required()
      ->check(CLI::ExistingFile);
  add_reconstruct_flags(cmd_reconstruct);
  cmd_reconstruct->add_option("--out-dir", ra.out_dir, "output directory");

  CLI::App* cmd_refine = app.add_subcommand(
      "refine", "direct-shooting refinement of an assembled process");
  cmd_refine->add_option("spec", fa.spec, "problem description file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_refine->add_option("assembled", fa.assembled, "assembled process CSV")
      ->required()
      ->check(CLI::ExistingFile);
  add_refine_flags(cmd_refine);
  cmd_refine->add_option("--out-dir", fa.out_dir, "output directory");

  CLI::App* cmd_pipeline = app.add_subcommand(
      "pipeline", "moments, reconstruction, and refinement in sequence");
  add_moment_flags(cmd_pipeline);
  add_reconstruct_flags(cmd_pipeline);
  add_refine_flags(cmd_pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_moments->parsed()) {
      run_moments(ma);
      return 0;
    }
    if (cmd_reconstruct->parsed()) {
      run_reconstruct(ra);
      return 0;
    }
    if (cmd_refine->parsed()) {
      fa.has_relaxation_cost = cmd_refine->count("--relaxation-cost") > 0;
      return run_refine(fa);
    }
    fa.has_relaxation_cost = cmd_pipeline->count("--relaxation-cost") > 0;
    ra.spec = ma.spec;
    fa.spec = ma.spec;
    ra.out_dir = ma.out_dir;
    fa.out_dir = ma.out_dir;
    return run_pipeline(ma, ra, fa);
  } catch (const std::exception& e) {
    std::cerr << (dynamic_cast<const ParseError*>(&e) ? "parse error: "
                                                      : "error: ")
              << e.what() << "\n";
    return code_for(e);
  }
}
