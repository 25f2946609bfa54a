#pragma once

#include <vector>

namespace faultflow {

// Barycentric triangle rule; weights sum to 1 (multiply by cell area).
struct TriQPoint {
  double l0, l1, l2, w;
};
const std::vector<TriQPoint>& tri_rule(int degree);

// Gauss-Legendre on [0,1]; weights sum to 1.
struct LineQPoint {
  double t, w;
};
const std::vector<LineQPoint>& line_rule(int degree);

}  // namespace faultflow
