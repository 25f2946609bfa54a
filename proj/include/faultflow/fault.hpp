#pragma once

#include <stdexcept>

namespace faultflow {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Planar fault aligned with the grid: the plane x = xg, restricted to
// tau_min <= y <= tau_max in 2D (a single point x = xg in 1D). The fault
// normal is +x, tangential direction +y. tf is the fault transmissibility.
struct FaultGeometry {
  int dim = 2;
  double xg = 0.0;
  double tau_min = 0.0, tau_max = 0.0;
  double tf = 1.0;

  void validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("fault: dim must be 1 or 2");
    if (!(tf > 0.0)) throw std::invalid_argument("fault: tf must be positive");
    if (dim == 2 && !(tau_min < tau_max))
      throw std::invalid_argument("fault: tau_min < tau_max required");
  }
};

}  // namespace faultflow
