#pragma once

#include <filesystem>

#include "momrec/ocp_problem.hpp"

namespace momrec {

// Loads a problem description. Line-oriented keyword format; '#' starts a
// comment. Polynomial blocks (dynamics <j>, cost, constraint) hold
// `term <coeff> <exponents over t, u..., x...>` lines and close with `end`.
// Errors carry file and line.
OcpProblem load_problem(const std::filesystem::path& path);

}  // namespace momrec
