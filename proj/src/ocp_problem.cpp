#include "momrec/ocp_problem.hpp"

#include <stdexcept>
#include <string>

namespace momrec {

CoordinateSystem OcpProblem::coordinates() const {
  CoordinateSystem cs;
  cs.coords.push_back({CoordKind::Time, 1, t_range});
  for (int k = 0; k < m; ++k) {
    cs.coords.push_back({CoordKind::Control, k + 1, u_box.iv[k]});
  }
  for (int j = 0; j < n; ++j) {
    cs.coords.push_back({CoordKind::State, j + 1, x_box.iv[j]});
  }
  return cs;
}

CoordinateSystem OcpProblem::state_coordinates() const {
  CoordinateSystem cs;
  for (int j = 0; j < n; ++j) {
    cs.coords.push_back({CoordKind::State, j + 1, x_box.iv[j]});
  }
  return cs;
}

void OcpProblem::validate() const {
  if (n < 1) throw std::invalid_argument("problem needs at least one state");
  if (m < 0) throw std::invalid_argument("negative control count");
  if (!(t_range.lo < t_range.hi)) {
    throw std::invalid_argument("degenerate time interval");
  }
  if (x_box.dim() != n) throw std::invalid_argument("state box dimension");
  if (u_box.dim() != m) throw std::invalid_argument("control box dimension");
  x_box.validate();
  u_box.validate();
  if (static_cast<int>(dynamics.size()) != n) {
    throw std::invalid_argument("dynamics entry count must equal states");
  }
  const int ad = ambient_dim();
  for (const auto& f : dynamics) {
    if (f.dim != ad) throw std::invalid_argument("dynamics ambient mismatch");
  }
  if (running_cost.dim != ad && !running_cost.terms.empty()) {
    throw std::invalid_argument("cost ambient mismatch");
  }
  for (const auto& g : path_constraints) {
    if (g.dim != ad) throw std::invalid_argument("constraint ambient mismatch");
  }
  if (x_init.size() != x_final.size()) {
    throw std::invalid_argument("endpoint vectors must both be given or both empty");
  }
  if (!x_init.empty()) {
    if (static_cast<int>(x_init.size()) != n) {
      throw std::invalid_argument("x_init dimension");
    }
    for (int j = 0; j < n; ++j) {
      if (!x_box.iv[j].contains(x_init[j]) || !x_box.iv[j].contains(x_final[j])) {
        throw std::invalid_argument("endpoint state outside state box (coordinate " +
                                    std::to_string(j + 1) + ")");
      }
    }
  }
}

double SampledProcess::duration() const {
  if (times.size() < 2) return 0.0;
  return times[times.size() - 1] - times[0];
}

void SampledProcess::validate(const OcpProblem& prob, double slack) const {
  const int s = samples();
  if (s < 2) throw std::invalid_argument("process needs at least 2 samples");
  if (states.rows() != prob.n || states.cols() != s) {
    throw std::invalid_argument("state sample dimensions");
  }
  if (controls.rows() != prob.m || controls.cols() != s) {
    throw std::invalid_argument("control sample dimensions");
  }
  for (int k = 1; k < s; ++k) {
    if (!(times[k] > times[k - 1])) {
      throw std::invalid_argument("sample times must be strictly increasing (sample " +
                                  std::to_string(k) + ")");
    }
  }
  for (int k = 0; k < s; ++k) {
    if (!prob.t_range.contains(times[k], slack)) {
      throw std::invalid_argument("sample time outside time interval (sample " +
                                  std::to_string(k) + ")");
    }
    for (int j = 0; j < prob.n; ++j) {
      if (!prob.x_box.iv[j].contains(states(j, k), slack)) {
        throw std::invalid_argument("state sample outside box (sample " +
                                    std::to_string(k) + ", coordinate " +
                                    std::to_string(j + 1) + ")");
      }
    }
    for (int j = 0; j < prob.m; ++j) {
      if (!prob.u_box.iv[j].contains(controls(j, k), slack)) {
        throw std::invalid_argument("control sample outside box (sample " +
                                    std::to_string(k) + ", coordinate " +
                                    std::to_string(j + 1) + ")");
      }
    }
  }
}

}  // namespace momrec
