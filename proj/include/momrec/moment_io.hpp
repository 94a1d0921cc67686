#pragma once

#include <filesystem>

#include "momrec/moment_vector.hpp"

namespace momrec {

// Text format, one datum per line:
//   dims <n> <m>
//   degree <2r>
//   box <coord> <lo> <hi>     (one per ambient coordinate, in order t, u, x)
//   source <tag>
//   problem <name>            (optional)
//   y <exponents...> <value>
// Values are written with 17 significant digits so save/load round-trips
// bitwise. Unknown header keys are ignored on load; duplicate or missing
// moment indices are errors.
void save_moments(const MomentVector& y, const std::filesystem::path& path);
MomentVector load_moments(const std::filesystem::path& path);

}  // namespace momrec
