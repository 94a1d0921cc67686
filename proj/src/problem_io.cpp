#include "momrec/problem_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "momrec/errors.hpp"

namespace momrec {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& msg) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

OcpProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  OcpProblem prob;
  prob.t_range = {0.0, 1.0};
  bool have_dims = false, have_tbox = false, have_cost = false;
  std::map<int, Interval> xboxes, uboxes;
  std::vector<std::pair<int, Polynomial>> dyn;  // (state ordinal, rhs)

  // Block state: 0 none, 1 dynamics, 2 cost, 3 constraint.
  int block = 0;
  int block_target = 0;
  Polynomial current;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;

    if (block != 0) {
      if (key == "term") {
        if (!have_dims) fail(path, lineno, "term before dims");
        PolyTerm t;
        if (!(ls >> t.coeff)) fail(path, lineno, "bad term coefficient");
        t.alpha.resize(prob.ambient_dim());
        for (auto& e : t.alpha) {
          if (!(ls >> e) || e < 0) {
            fail(path, lineno, "term needs " +
                                   std::to_string(prob.ambient_dim()) +
                                   " nonnegative exponents");
          }
        }
        int extra;
        if (ls >> extra) fail(path, lineno, "trailing exponent on term");
        current.terms.push_back(std::move(t));
      } else if (key == "end") {
        Polynomial p = current.canonical();
        if (block == 1) {
          dyn.emplace_back(block_target, std::move(p));
        } else if (block == 2) {
          prob.running_cost = std::move(p);
          have_cost = true;
        } else {
          prob.path_constraints.push_back(std::move(p));
        }
        block = 0;
      } else {
        fail(path, lineno, "expected 'term' or 'end' inside a block");
      }
      continue;
    }

    if (key == "name") {
      if (!(ls >> prob.name)) fail(path, lineno, "bad name");
    } else if (key == "dims") {
      if (!(ls >> prob.n >> prob.m) || prob.n < 1 || prob.m < 0) {
        fail(path, lineno, "bad dims (need n >= 1, m >= 0)");
      }
      have_dims = true;
    } else if (key == "tbox") {
      if (!(ls >> prob.t_range.lo >> prob.t_range.hi)) {
        fail(path, lineno, "bad tbox");
      }
      have_tbox = true;
    } else if (key == "free_time") {
      int v;
      if (!(ls >> v) || (v != 0 && v != 1)) fail(path, lineno, "bad free_time");
      prob.free_final_time = v == 1;
    } else if (key == "xbox" || key == "ubox") {
      int ord;
      Interval r;
      if (!(ls >> ord >> r.lo >> r.hi) || ord < 1) {
        fail(path, lineno, std::string("bad ") + key);
      }
      auto& dst = key == "xbox" ? xboxes : uboxes;
      if (dst.count(ord)) fail(path, lineno, key + " repeated for coordinate " +
                                                 std::to_string(ord));
      dst[ord] = r;
    } else if (key == "x_init" || key == "x_final") {
      if (!have_dims) fail(path, lineno, key + " before dims");
      std::vector<double> v(prob.n);
      for (auto& e : v) {
        if (!(ls >> e)) fail(path, lineno, key + " needs " +
                                               std::to_string(prob.n) +
                                               " values");
      }
      (key == "x_init" ? prob.x_init : prob.x_final) = std::move(v);
    } else if (key == "dynamics") {
      if (!have_dims) fail(path, lineno, "dynamics before dims");
      int ord;
      if (!(ls >> ord) || ord < 1 || ord > prob.n) {
        fail(path, lineno, "dynamics ordinal out of range");
      }
      block = 1;
      block_target = ord;
      current = Polynomial{};
      current.dim = prob.ambient_dim();
    } else if (key == "cost") {
      if (!have_dims) fail(path, lineno, "cost before dims");
      if (have_cost) fail(path, lineno, "duplicate cost block");
      block = 2;
      current = Polynomial{};
      current.dim = prob.ambient_dim();
    } else if (key == "constraint") {
      if (!have_dims) fail(path, lineno, "constraint before dims");
      block = 3;
      current = Polynomial{};
      current.dim = prob.ambient_dim();
    } else {
      fail(path, lineno, "unknown keyword '" + key + "'");
    }
  }
  if (block != 0) fail(path, lineno, "unterminated block at end of file");
  if (!have_dims) fail(path, lineno, "missing dims");
  if (!have_tbox) fail(path, lineno, "missing tbox");

  prob.x_box.iv.resize(prob.n);
  for (int j = 1; j <= prob.n; ++j) {
    auto it = xboxes.find(j);
    if (it == xboxes.end()) {
      throw ParseError(path.string() + ": missing xbox for coordinate " +
                       std::to_string(j));
    }
    prob.x_box.iv[j - 1] = it->second;
  }
  if (static_cast<int>(xboxes.size()) != prob.n) {
    throw ParseError(path.string() + ": xbox ordinal outside dims");
  }
  prob.u_box.iv.resize(prob.m);
  for (int j = 1; j <= prob.m; ++j) {
    auto it = uboxes.find(j);
    if (it == uboxes.end()) {
      throw ParseError(path.string() + ": missing ubox for coordinate " +
                       std::to_string(j));
    }
    prob.u_box.iv[j - 1] = it->second;
  }
  if (static_cast<int>(uboxes.size()) != prob.m) {
    throw ParseError(path.string() + ": ubox ordinal outside dims");
  }

  prob.dynamics.assign(prob.n, Polynomial{});
  std::vector<char> have_dyn(prob.n, 0);
  for (auto& [ord, p] : dyn) {
    if (have_dyn[ord - 1]) {
      throw ParseError(path.string() + ": duplicate dynamics block for x" +
                       std::to_string(ord));
    }
    have_dyn[ord - 1] = 1;
    prob.dynamics[ord - 1] = std::move(p);
  }
  for (int j = 0; j < prob.n; ++j) {
    if (!have_dyn[j]) {
      throw ParseError(path.string() + ": missing dynamics block for x" +
                       std::to_string(j + 1));
    }
    prob.dynamics[j].dim = prob.ambient_dim();
  }
  if (!have_cost) {
    prob.running_cost = Polynomial{};
    prob.running_cost.dim = prob.ambient_dim();
  }

  try {
    prob.validate();
  } catch (const std::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return prob;
}

}  // namespace momrec
