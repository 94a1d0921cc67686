#pragma once

#include <filesystem>

#include "momrec/atomic_fit.hpp"
#include "momrec/ocp_problem.hpp"
#include "momrec/series.hpp"

namespace momrec {

// All writers emit 17-significant-digit values and fixed headers, so a
// rerun produces byte-identical files and every file can be read back by
// the loader next to it.

// header: time,x1,...,u1,...
void write_trajectory_csv(const std::filesystem::path& path,
                          const SampledProcess& proc);
SampledProcess read_trajectory_csv(const std::filesystem::path& path,
                                   const OcpProblem& prob);

// header: coord,time,value,weight
void write_series_csv(const std::filesystem::path& path,
                      const CoordinateSeries& series);
CoordinateSeries read_series_csv(const std::filesystem::path& path);

// header: <coordinate labels...>,weight
void write_atoms_csv(const std::filesystem::path& path,
                     const AtomicMeasure& mu);
void read_atoms_csv(const std::filesystem::path& path, Eigen::MatrixXd& points,
                    Eigen::VectorXd& weights);

}  // namespace momrec
