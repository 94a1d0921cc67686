#include "momrec/series.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "momrec/errors.hpp"

namespace momrec {

std::vector<MultiIndex> marginal_indices(const CoordinateSystem& coords,
                                         int coord_position, int degree) {
  coords.validate();
  if (!coords.has_time()) {
    throw std::invalid_argument("marginal needs a time coordinate");
  }
  if (coord_position <= 0 || coord_position >= coords.dim()) {
    throw std::invalid_argument("marginal coordinate position out of range");
  }
  std::vector<MultiIndex> out;
  for (auto& alpha : enumerate_indices(coords.dim(), degree)) {
    bool ok = true;
    for (int c = 0; c < coords.dim() && ok; ++c) {
      if (alpha[c] != 0 && c != 0 && c != coord_position) ok = false;
    }
    if (ok) out.push_back(std::move(alpha));
  }
  return out;
}

CoordinateSeries reconstruct_coordinate(const MomentVector& y,
                                        int coord_position,
                                        const ReconstructOptions& opts) {
  if (coord_position <= 0 || coord_position >= y.dim()) {
    throw std::invalid_argument("coordinate position out of range");
  }
  if (!y.coords.has_time()) {
    throw std::invalid_argument("reconstruction needs a time coordinate");
  }
  const MomentVector ysub = restrict_moments(y, {0, coord_position});
  const Grid grid = build_grid(ysub.coords, {opts.grid_time, opts.grid_coord});
  return reconstruct_coordinate(y, coord_position, grid, opts);
}

CoordinateSeries reconstruct_coordinate(const MomentVector& y,
                                        int coord_position, const Grid& grid,
                                        const ReconstructOptions& opts) {
  y.validate();
  if (!y.coords.has_time()) {
    throw std::invalid_argument("reconstruction needs a time coordinate");
  }
  if (coord_position <= 0 || coord_position >= y.dim()) {
    throw std::invalid_argument(
        "cannot reconstruct the time coordinate against itself");
  }
  const Coordinate& coord = y.coords.coords[coord_position];
  const MomentVector ysub = restrict_moments(y, {0, coord_position});
  if (grid.dim() != 2 || !grid.coords.same_layout(ysub.coords, 1e-9)) {
    throw std::invalid_argument(
        "reconstruction grid must span (time, coordinate)");
  }

  const AtomicMeasure fit = fit_atomic(ysub, grid, opts.fit);
  const SupportExtraction sup = extract_support(fit, opts.threshold);

  // Atoms sharing a grid time collapse to their weighted mean unless they
  // spread over too much of the coordinate's range.
  std::map<double, std::vector<int>> cells;
  for (int i = 0; i < sup.measure.size(); ++i) {
    cells[sup.measure.points(0, i)].push_back(i);
  }

  CoordinateSeries series;
  series.kind = coord.kind;
  series.ordinal = coord.ordinal;
  series.label = coord.label();
  series.fit_error = sup.measure.fit_error;
  series.retained_mass_fraction = sup.retained_mass_fraction;
  const double range = coord.range.length();

  for (const auto& [time, atoms] : cells) {
    double cell_max = 0.0;
    for (int i : atoms) cell_max = std::max(cell_max, sup.measure.weights[i]);
    const double floor = opts.cell_weight_fraction * cell_max;

    double wsum = 0.0, vsum = 0.0;
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (int i : atoms) {
      const double w = sup.measure.weights[i];
      if (w < floor) continue;
      const double v = sup.measure.points(1, i);
      wsum += w;
      vsum += w * v;
      vmin = first ? v : std::min(vmin, v);
      vmax = first ? v : std::max(vmax, v);
      first = false;
    }
    if (wsum <= 0.0) continue;
    if (vmax - vmin > opts.spread_fraction * range) {
      series.multimodal.push_back({time, vmax - vmin});
    } else {
      series.way_points.push_back({time, vsum / wsum, wsum});
    }
  }
  return series;
}

namespace {

const CoordinateSeries* find_series(const std::vector<CoordinateSeries>& all,
                                    CoordKind kind, int ordinal) {
  for (const auto& s : all) {
    if (s.kind == kind && s.ordinal == ordinal) return &s;
  }
  return nullptr;
}

// Way-points with pooled duplicate times, ascending.
std::vector<WayPoint> pooled(const CoordinateSeries& s) {
  std::map<double, WayPoint> merged;
  for (const auto& w : s.way_points) {
    auto [it, fresh] = merged.try_emplace(w.time, w);
    if (!fresh) {
      WayPoint& dst = it->second;
      const double total = dst.weight + w.weight;
      if (total > 0.0) {
        dst.value = (dst.value * dst.weight + w.value * w.weight) / total;
      }
      dst.weight = total;
    }
  }
  std::vector<WayPoint> out;
  out.reserve(merged.size());
  for (auto& [t, w] : merged) out.push_back(w);

  // A cell holding an order of magnitude less mass than an adjacent cell is
  // usually residue left behind where a neighboring atom absorbed the cell's
  // true mass; its value is an arbitrary grid point and would bend the
  // interpolant. Melt such cells away from their heavier neighbors.
  constexpr double kAbsorbedFraction = 0.1;
  auto absorbed = [&](std::size_t i) {
    const double left = i > 0 ? out[i - 1].weight : 0.0;
    const double right = i + 1 < out.size() ? out[i + 1].weight : 0.0;
    return out[i].weight < kAbsorbedFraction * std::max(left, right);
  };
  for (bool again = out.size() > 2; again;) {
    again = false;
    for (std::size_t i = 0; i < out.size() && out.size() > 2; ++i) {
      if (absorbed(i)) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        again = true;
        break;
      }
    }
  }
  return out;
}

double interp(const std::vector<WayPoint>& pts, double t) {
  if (t <= pts.front().time) return pts.front().value;
  if (t >= pts.back().time) return pts.back().value;
  auto hi = std::lower_bound(
      pts.begin(), pts.end(), t,
      [](const WayPoint& w, double v) { return w.time < v; });
  auto lo = hi - 1;
  const double span = hi->time - lo->time;
  const double a = span > 0.0 ? (t - lo->time) / span : 0.0;
  return (1.0 - a) * lo->value + a * hi->value;
}

}  // namespace

ReconstructedProcess assemble_process(
    const OcpProblem& prob, const std::vector<CoordinateSeries>& series,
    double duration, int n_time_samples) {
  prob.validate();
  if (!(duration > 0.0)) throw std::invalid_argument("need positive duration");
  if (n_time_samples < 2) {
    throw std::invalid_argument("need at least 2 assembly samples");
  }

  ReconstructedProcess out;
  out.duration = duration;
  const double t0 = prob.t_range.lo;

  SampledProcess& proc = out.assembled;
  proc.times.resize(n_time_samples);
  for (int k = 0; k < n_time_samples; ++k) {
    proc.times[k] = t0 + duration * k / (n_time_samples - 1);
  }
  proc.states.resize(prob.n, n_time_samples);
  proc.controls.resize(prob.m, n_time_samples);

  auto fill = [&](CoordKind kind, int ordinal, const Interval& box,
                  Eigen::Ref<Eigen::MatrixXd> dst, int row, bool clamp) {
    const CoordinateSeries* s = find_series(series, kind, ordinal);
    const std::string label =
        Coordinate{kind, ordinal, box}.label();
    if (!s) {
      throw std::invalid_argument("missing series for coordinate " + label);
    }
    const auto pts = pooled(*s);
    if (pts.empty()) {
      throw std::invalid_argument("series for coordinate " + label +
                                  " has no way-points");
    }
    for (int k = 0; k < n_time_samples; ++k) {
      double v = interp(pts, proc.times[k]);
      if (clamp) v = std::min(box.hi, std::max(box.lo, v));
      dst(row, k) = v;
    }
    if (kind == CoordKind::State) {
      out.states.push_back(*s);
    } else {
      out.controls.push_back(*s);
    }
  };

  for (int j = 0; j < prob.n; ++j) {
    fill(CoordKind::State, j + 1, prob.x_box.iv[j], proc.states, j, false);
  }
  for (int j = 0; j < prob.m; ++j) {
    fill(CoordKind::Control, j + 1, prob.u_box.iv[j], proc.controls, j, true);
  }

  proc.validate(prob);
  return out;
}

DensityFit polynomial_density_baseline(const MomentVector& y,
                                       int coord_position,
                                       int density_degree) {
  y.validate();
  if (!y.coords.has_time()) {
    throw std::invalid_argument("density baseline needs a time coordinate");
  }
  if (coord_position <= 0 || coord_position >= y.dim()) {
    throw std::invalid_argument("coordinate position out of range");
  }
  if (density_degree < 0) throw std::invalid_argument("negative degree");
  if (2 * density_degree > y.degree) {
    throw std::invalid_argument(
        "density degree needs time moments up to twice the degree");
  }

  const int d = density_degree;
  Eigen::MatrixXd h(d + 1, d + 1);
  Eigen::VectorXd g(d + 1);
  MultiIndex alpha(y.dim(), 0);
  for (int i = 0; i <= d; ++i) {
    for (int k = 0; k <= d; ++k) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[0] = i + k;
      h(i, k) = y.value_at(alpha);
    }
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = i;
    alpha[coord_position] = 1;
    g[i] = y.value_at(alpha);
  }

  DensityFit fit;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  if (qr.rank() < d + 1) {
    // Singular Hankel system (measure concentrated on few time points):
    // fall back to a ridge solve.
    const double ridge = 1e-10 * (1.0 + h.norm());
    Eigen::MatrixXd hr = h.transpose() * h;
    hr.diagonal().array() += ridge;
    fit.coeffs = hr.ldlt().solve(h.transpose() * g);
    fit.regularized = true;
  } else {
    fit.coeffs = qr.solve(g);
  }
  return fit;
}

}  // namespace momrec
