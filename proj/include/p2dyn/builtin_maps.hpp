#pragma once

#include <string>
#include <vector>

#include "p2dyn/polymap.hpp"

namespace p2dyn {

/// [z^d : w^d : t^d], fibered over [z^d : w^d].
HomPolyMap power_map(int degree);

/// Suspension [P : Q : t^4] of the degree-4 map
/// zeta -> (zeta^2+1)^2 / (4 zeta (zeta^2-1)), i.e.
/// P = (z^2+w^2)^2, Q = 4zw(z^2-w^2).
HomPolyMap lattes4_suspension();

/// Resolves a builtin name (power2, power4, lattes4susp) or a file path.
HomPolyMap resolve_map(const std::string& name_or_path);

std::vector<std::string> builtin_map_names();

}  // namespace p2dyn
