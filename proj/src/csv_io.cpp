#include "momrec/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "momrec/errors.hpp"

namespace momrec {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::filesystem::path& path, int line,
                    const std::string& s) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + ":" + std::to_string(line) +
                     ": bad numeric field '" + s + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<std::vector<std::string>> read_rows(
    const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw ParseError(path.string() + ": expected header '" + expected_header +
                     "', got '" + line + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(split_csv(line));
  }
  return rows;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path,
                          const SampledProcess& proc) {
  auto out = open_out(path);
  out << "time";
  for (int j = 0; j < proc.states.rows(); ++j) out << ",x" << (j + 1);
  for (int j = 0; j < proc.controls.rows(); ++j) out << ",u" << (j + 1);
  out << "\n";
  for (int k = 0; k < proc.samples(); ++k) {
    out << sci(proc.times[k]);
    for (int j = 0; j < proc.states.rows(); ++j) out << "," << sci(proc.states(j, k));
    for (int j = 0; j < proc.controls.rows(); ++j) out << "," << sci(proc.controls(j, k));
    out << "\n";
  }
  if (!out.good()) throw ParseError("write failed for " + path.string());
}

SampledProcess read_trajectory_csv(const std::filesystem::path& path,
                                   const OcpProblem& prob) {
  std::string header = "time";
  for (int j = 0; j < prob.n; ++j) header += ",x" + std::to_string(j + 1);
  for (int j = 0; j < prob.m; ++j) header += ",u" + std::to_string(j + 1);
  const auto rows = read_rows(path, header);
  if (rows.size() < 2) {
    throw ParseError(path.string() + ": need at least 2 samples");
  }
  SampledProcess proc;
  const int s = static_cast<int>(rows.size());
  proc.times.resize(s);
  proc.states.resize(prob.n, s);
  proc.controls.resize(prob.m, s);
  const size_t want = 1 + static_cast<size_t>(prob.n) + prob.m;
  for (int k = 0; k < s; ++k) {
    if (rows[k].size() != want) {
      throw ParseError(path.string() + ":" + std::to_string(k + 2) +
                       ": expected " + std::to_string(want) + " fields");
    }
    int f = 0;
    proc.times[k] = parse_double(path, k + 2, rows[k][f++]);
    for (int j = 0; j < prob.n; ++j) {
      proc.states(j, k) = parse_double(path, k + 2, rows[k][f++]);
    }
    for (int j = 0; j < prob.m; ++j) {
      proc.controls(j, k) = parse_double(path, k + 2, rows[k][f++]);
    }
  }
  return proc;
}

void write_series_csv(const std::filesystem::path& path,
                      const CoordinateSeries& series) {
  auto out = open_out(path);
  out << "coord,time,value,weight\n";
  for (const auto& w : series.way_points) {
    out << series.label << "," << sci(w.time) << "," << sci(w.value) << ","
        << sci(w.weight) << "\n";
  }
  if (!out.good()) throw ParseError("write failed for " + path.string());
}

CoordinateSeries read_series_csv(const std::filesystem::path& path) {
  const auto rows = read_rows(path, "coord,time,value,weight");
  CoordinateSeries s;
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != 4) {
      throw ParseError(path.string() + ":" + std::to_string(k + 2) +
                       ": expected 4 fields");
    }
    if (k == 0) {
      s.label = rows[k][0];
    } else if (rows[k][0] != s.label) {
      throw ParseError(path.string() + ":" + std::to_string(k + 2) +
                       ": mixed coordinate labels");
    }
    WayPoint w;
    w.time = parse_double(path, static_cast<int>(k) + 2, rows[k][1]);
    w.value = parse_double(path, static_cast<int>(k) + 2, rows[k][2]);
    w.weight = parse_double(path, static_cast<int>(k) + 2, rows[k][3]);
    s.way_points.push_back(w);
  }
  if (!s.label.empty()) {
    if (s.label[0] == 'u') s.kind = CoordKind::Control;
    if (s.label[0] == 'x') s.kind = CoordKind::State;
    try {
      s.ordinal = std::stoi(s.label.substr(1));
    } catch (const std::exception&) {
      s.ordinal = 1;
    }
  }
  return s;
}

void write_atoms_csv(const std::filesystem::path& path,
                     const AtomicMeasure& mu) {
  auto out = open_out(path);
  for (int c = 0; c < mu.coords.dim(); ++c) {
    out << (c ? "," : "") << mu.coords.coords[c].label();
  }
  out << ",weight\n";
  for (int i = 0; i < mu.size(); ++i) {
    for (int c = 0; c < mu.coords.dim(); ++c) {
      out << (c ? "," : "") << sci(mu.points(c, i));
    }
    out << "," << sci(mu.weights[i]) << "\n";
  }
  if (!out.good()) throw ParseError("write failed for " + path.string());
}

void read_atoms_csv(const std::filesystem::path& path, Eigen::MatrixXd& points,
                    Eigen::VectorXd& weights) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 2 || header.back() != "weight") {
    throw ParseError(path.string() + ": bad atoms header");
  }
  const int dim = static_cast<int>(header.size()) - 1;
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": field count mismatch");
    }
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_double(path, lineno, f));
    rows.push_back(std::move(row));
  }
  points.resize(dim, static_cast<Eigen::Index>(rows.size()));
  weights.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) {
    for (int c = 0; c < dim; ++c) points(c, static_cast<Eigen::Index>(k)) = rows[k][c];
    weights[static_cast<Eigen::Index>(k)] = rows[k][dim];
  }
}

}  // namespace momrec
