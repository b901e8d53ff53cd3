#pragma once

#include <array>
#include <vector>

namespace fdflow {

/// Symmetric triangle quadrature rule in barycentric coordinates.
/// Weights sum to 1; multiply by the physical element area when integrating.
struct TriRule {
  int degree = 0;  // polynomial exactness
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Fixed rules of exactness degree 4 (6 pts), 5 (7 pts), 6 (12 pts).
/// Throws std::invalid_argument for other degrees.
const TriRule& tri_rule(int degree);

}  // namespace fdflow
