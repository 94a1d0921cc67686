#include "momrec/moment_io.hpp"

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

std::string index_string(const MultiIndex& a) {
  std::string s;
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(a[i]);
  }
  return s;
}

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& msg) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

void save_moments(const MomentVector& y, const std::filesystem::path& path) {
  y.validate();
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path.string() + " for writing");
  }
  out << "dims " << y.coords.n_states() << " " << y.coords.m_controls() << "\n";
  out << "degree " << y.degree << "\n";
  for (const auto& c : y.coords.coords) {
    out << "box " << c.label() << " " << sci(c.range.lo) << " "
        << sci(c.range.hi) << "\n";
  }
  out << "source " << y.source << "\n";
  if (!y.problem_name.empty()) out << "problem " << y.problem_name << "\n";
  for (size_t i = 0; i < y.indices.size(); ++i) {
    out << "y " << index_string(y.indices[i]) << " "
        << sci(y.values[static_cast<Eigen::Index>(i)]) << "\n";
  }
  if (!out.good()) {
    throw ParseError("write failed for " + path.string());
  }
}

MomentVector load_moments(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  int n = -1, m = -1, degree = -1;
  std::string source = "oracle", problem;
  std::vector<Coordinate> coords;
  struct Pending {
    MultiIndex alpha;
    double value;
    int line;
  };
  std::vector<Pending> pend;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    if (key == "dims") {
      if (!(ls >> n >> m) || n < 0 || m < 0) fail(path, lineno, "bad dims");
    } else if (key == "degree") {
      if (!(ls >> degree) || degree < 0) fail(path, lineno, "bad degree");
      if (degree % 2 != 0) fail(path, lineno, "moment degree must be even");
    } else if (key == "box") {
      std::string label;
      double lo, hi;
      if (!(ls >> label >> lo >> hi)) fail(path, lineno, "bad box line");
      Coordinate c;
      if (label == "t") {
        c.kind = CoordKind::Time;
        c.ordinal = 1;
      } else if (label.size() >= 2 && (label[0] == 'u' || label[0] == 'x')) {
        c.kind = label[0] == 'u' ? CoordKind::Control : CoordKind::State;
        try {
          c.ordinal = std::stoi(label.substr(1));
        } catch (const std::exception&) {
          fail(path, lineno, "bad coordinate label '" + label + "'");
        }
      } else {
        fail(path, lineno, "bad coordinate label '" + label + "'");
      }
      c.range = {lo, hi};
      coords.push_back(c);
    } else if (key == "source") {
      if (!(ls >> source)) fail(path, lineno, "bad source line");
    } else if (key == "problem") {
      if (!(ls >> problem)) fail(path, lineno, "bad problem line");
    } else if (key == "y") {
      if (coords.empty()) {
        fail(path, lineno, "moment line before coordinate declarations");
      }
      Pending p;
      p.line = lineno;
      p.alpha.resize(coords.size());
      for (auto& e : p.alpha) {
        if (!(ls >> e) || e < 0) fail(path, lineno, "bad moment exponent");
      }
      if (!(ls >> p.value)) fail(path, lineno, "bad moment value");
      pend.push_back(std::move(p));
    } else {
      continue;  // unknown header keys are ignored
    }
  }

  if (n < 0 || m < 0) fail(path, lineno, "missing dims header");
  if (degree < 0) fail(path, lineno, "missing degree header");
  if (coords.empty()) fail(path, lineno, "missing box declarations");

  CoordinateSystem cs;
  cs.coords = coords;
  try {
    cs.validate();
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (cs.n_states() != n) {
    throw ParseError(path.string() + ": state box count does not match dims");
  }
  if (cs.m_controls() != m) {
    throw ParseError(path.string() + ": control box count does not match dims");
  }

  MomentVector y = make_moment_vector(cs, degree);
  y.source = source;
  y.problem_name = problem;
  std::vector<char> seen(y.indices.size(), 0);
  for (const auto& p : pend) {
    const auto pos = y.position(p.alpha);
    if (!pos) {
      fail(path, p.line, "moment index (" + index_string(p.alpha) +
                             ") outside degree " + std::to_string(degree));
    }
    if (seen[*pos]) {
      fail(path, p.line, "duplicate moment index (" + index_string(p.alpha) + ")");
    }
    seen[*pos] = 1;
    y.values[*pos] = p.value;
  }
  for (size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ParseError(path.string() + ": missing moment index (" +
                       index_string(y.indices[i]) + ")");
    }
  }
  try {
    y.validate();
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return y;
}

}  // namespace momrec
